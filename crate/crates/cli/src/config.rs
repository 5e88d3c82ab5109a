//! Run configuration (JSON, schema `v1`) and tolerance profiles.

use std::collections::BTreeMap;

use holoherm::model::phase_intertwiner;
use holoherm::serde_repr::{matrix_from_nested, matrix_to_nested, NestedMatrix};
use holoherm::ComplexMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "v1";
pub const TOL_PROFILE_ENV: &str = "HOLOHERM_TOL_PROFILE";
/// Families beyond this total degree make the Gram stage impractically slow.
pub const MAX_DEGREE_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XSpec {
    /// Diagonal intertwiner `diag(e^{iθ_k})`.
    Phases(Vec<f64>),
    Matrix(NestedMatrix),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    /// Run the transform isometry stage (only attempted for `n <= 2`).
    #[serde(default = "default_true")]
    pub isometry: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { nodes: default_nodes(), isometry: true }
    }
}

fn default_nodes() -> usize {
    64
}

fn default_true() -> bool {
    true
}

fn default_degree() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub n: usize,
    pub a: NestedMatrix,
    pub b: NestedMatrix,
    pub c: NestedMatrix,
    /// `ρ = rho_fraction · λ_0`.
    pub rho_fraction: f64,
    pub x: XSpec,
    /// Optional unitary replacing the solver's eigenvectors of `Φ''_{zz̄}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenbasis: Option<NestedMatrix>,
    #[serde(default = "default_degree")]
    pub max_degree: usize,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    /// Seed for the random pairs of the adjointness stage.
    #[serde(default)]
    pub seed: u64,
}

fn cfg_err(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Config { path: path.to_string(), message: msg.into() }
}

fn square(path: &str, m: &NestedMatrix, n: usize) -> Result<ComplexMatrix, CliError> {
    let mat = matrix_from_nested(m).map_err(|e| cfg_err(path, e.to_string()))?;
    if mat.nrows() != n || mat.ncols() != n {
        return Err(cfg_err(path, format!("expected {n}x{n}, got {}x{}", mat.nrows(), mat.ncols())));
    }
    Ok(mat)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            cfg_err(&path, e.into_inner().to_string())
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Schema checks that do not need any linear algebra on the triple.
    pub fn check(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA {
            return Err(cfg_err("schema", format!("unsupported schema {:?}, expected {SCHEMA:?}", self.schema)));
        }
        if self.n == 0 {
            return Err(cfg_err("n", "must be at least 1"));
        }
        for (name, m) in [("a", &self.a), ("b", &self.b), ("c", &self.c)] {
            square(name, m, self.n)?;
        }
        if !(self.rho_fraction > 0.0 && self.rho_fraction < 1.0) {
            return Err(cfg_err(
                "rho_fraction",
                format!("ρ = rho_fraction·λ₀ must satisfy 0<ρ<λ₀, so rho_fraction must lie in (0,1); got {}", self.rho_fraction),
            ));
        }
        match &self.x {
            XSpec::Phases(p) if p.len() != self.n => {
                return Err(cfg_err("x.phases", format!("expected {} angles, got {}", self.n, p.len())));
            }
            XSpec::Phases(p) if p.iter().any(|t| !t.is_finite()) => return Err(cfg_err("x.phases", "angles must be finite")),
            XSpec::Matrix(m) => {
                square("x.matrix", m, self.n)?;
            }
            _ => {}
        }
        if let Some(u) = &self.eigenbasis {
            square("eigenbasis", u, self.n)?;
        }
        if self.max_degree > MAX_DEGREE_LIMIT {
            return Err(cfg_err("max_degree", format!("at most {MAX_DEGREE_LIMIT} is supported")));
        }
        if self.quadrature.nodes < 2 {
            return Err(cfg_err("quadrature.nodes", "need at least 2 nodes"));
        }
        for (k, v) in &self.tolerances {
            if !crate::report::CHECK_NAMES.contains(&k.as_str()) {
                return Err(cfg_err(&format!("tolerances.{k}"), "unknown tolerance name"));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return Err(cfg_err(&format!("tolerances.{k}"), "must be a finite non-negative number"));
            }
        }
        Ok(())
    }

    pub fn matrices(&self) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix), CliError> {
        Ok((square("a", &self.a, self.n)?, square("b", &self.b, self.n)?, square("c", &self.c, self.n)?))
    }

    pub fn intertwiner(&self) -> Result<ComplexMatrix, CliError> {
        match &self.x {
            XSpec::Phases(p) => Ok(phase_intertwiner(p)),
            XSpec::Matrix(m) => square("x.matrix", m, self.n),
        }
    }

    pub fn eigenbasis_matrix(&self) -> Result<Option<ComplexMatrix>, CliError> {
        self.eigenbasis.as_ref().map(|u| square("eigenbasis", u, self.n)).transpose()
    }

    /// Config for a given triple with defaults for everything else.
    pub fn for_triple(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, rho_fraction: f64, x: XSpec) -> Self {
        RunConfig {
            schema: SCHEMA.to_string(),
            n: a.nrows(),
            a: matrix_to_nested(a),
            b: matrix_to_nested(b),
            c: matrix_to_nested(c),
            rho_fraction,
            x,
            eigenbasis: None,
            max_degree: default_degree(),
            tolerances: BTreeMap::new(),
            quadrature: QuadratureConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TolProfile {
    Default,
    /// Algebraic tolerances tightened tenfold.
    Strict,
    /// Everything loosened a hundredfold.
    Loose,
}

impl TolProfile {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "default" => Ok(TolProfile::Default),
            "strict" => Ok(TolProfile::Strict),
            "loose" => Ok(TolProfile::Loose),
            other => Err(cfg_err(TOL_PROFILE_ENV, format!("unknown tolerance profile {other:?} (default, strict, loose)"))),
        }
    }

    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var(TOL_PROFILE_ENV) {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(TolProfile::Default),
        }
    }
}

/// Named tolerances for the report; `condition1_margin` is a slack on the
/// lower bound `ρ²/2`, all others are upper bounds on the residual.
pub fn tolerances(profile: TolProfile, overrides: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let mut t: BTreeMap<String, f64> = [
        ("ccr", 1e-10),
        ("eq2202", 1e-10),
        ("symmetry_Q", 1e-10),
        ("symmetry_S", 1e-10),
        ("condition1_margin", 1e-12),
        ("gram_max_offdiag", 1e-8),
        ("gram_diag_maxrel", 1e-8),
        ("eigen_max", 1e-9),
        ("rodrigues_max", 1e-9),
        ("adjoint_max", 1e-8),
        ("completeness_residual", 1e-8),
        ("isometry", 1e-3),
        ("example_closed_form", 1e-12),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    match profile {
        TolProfile::Default => {}
        TolProfile::Strict => {
            for k in ["ccr", "eq2202", "symmetry_Q", "symmetry_S", "eigen_max", "rodrigues_max"] {
                *t.get_mut(k).expect("known name") /= 10.0;
            }
        }
        TolProfile::Loose => t.values_mut().for_each(|v| *v *= 100.0),
    }
    for (k, v) in overrides {
        t.insert(k.clone(), *v);
    }
    t
}
