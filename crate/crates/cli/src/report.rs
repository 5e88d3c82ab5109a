//! Machine-readable verification reports.

use std::collections::BTreeMap;

use holoherm::serde_repr::NestedMatrix;
use serde::{Deserialize, Serialize};

pub const CHECK_NAMES: &[&str] = &[
    "ccr",
    "eq2202",
    "symmetry_Q",
    "symmetry_S",
    "condition1_margin",
    "gram_max_offdiag",
    "gram_diag_maxrel",
    "eigen_max",
    "rodrigues_max",
    "adjoint_max",
    "completeness_residual",
    "isometry",
    "example_closed_form",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Pass iff `value <= limit`.
    AtMost,
    /// Pass iff `value >= limit`.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub value: f64,
    pub limit: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Check {
    pub fn at_most(value: f64, limit: f64) -> Self {
        Check { value, limit, bound: Bound::AtMost, pass: value.is_finite() && value <= limit }
    }

    pub fn at_least(value: f64, limit: f64) -> Self {
        Check { value, limit, bound: Bound::AtLeast, pass: value.is_finite() && value >= limit }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub label: String,
    pub n: usize,
    pub q: NestedMatrix,
    pub s: NestedMatrix,
    pub rho2: f64,
    pub mu2: Vec<f64>,
    pub lambda: Vec<f64>,
    pub max_degree: usize,
    pub residuals: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, Check>,
    pub pass: bool,
    pub warnings: Vec<String>,
    /// Wall time per stage in milliseconds; the only nondeterministic field.
    pub timings_ms: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timings cleared, for reproducibility comparisons.
    pub fn without_timings(&self) -> Self {
        VerificationReport { timings_ms: BTreeMap::new(), ..self.clone() }
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, c)| !c.pass).map(|(k, _)| k.as_str()).collect()
    }

    /// Derives `pass` from the checks; call after all checks are recorded.
    pub fn finalize(&mut self) {
        self.pass = self.checks.values().all(|c| c.pass) && self.residuals.values().all(|v| v.is_finite());
    }
}
