//! Functions `P(z) exp(-<z,Mz>)`, first-order operators `G ∂/∂z + H z`, and the
//! holomorphic Hermite family generated by the creation operators.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::{conj, real};
use crate::poly::PRUNE_REL;
use crate::serde_repr::{complex_to_pair, matrix_from_nested, matrix_to_nested, pair_to_complex, NestedMatrix};
use crate::{ComplexMatrix, Error, Exec, GeneratorData, MatrixExt, MultiIndex, PolyC, Result, WeightData};

/// Relative tolerance when checking that an operand carries the exponent `Q`.
pub const M_MATCH_TOL: f64 = 1e-9;

/// `z ↦ P(z) exp(-<z, M z>)` with complex symmetric `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPoly {
    pub poly: PolyC,
    pub m: ComplexMatrix,
}

impl GaussPoly {
    pub fn new(poly: PolyC, m: ComplexMatrix) -> Self {
        assert_eq!(poly.dim(), m.nrows(), "polynomial and exponent dimension");
        GaussPoly { poly, m }
    }

    /// `exp(-<z, M z>)`.
    pub fn gaussian(m: ComplexMatrix) -> Self {
        let n = m.nrows();
        GaussPoly { poly: PolyC::one(n), m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GaussPoly { poly: self.poly.scale(c), m: self.m.clone() }
    }

    /// Same function with the polynomial multiplied by `z^α`.
    pub fn mul_monomial(&self, alpha: &MultiIndex) -> Self {
        GaussPoly { poly: self.poly.mul(&PolyC::monomial(alpha.clone(), real(1.0))), m: self.m.clone() }
    }

    /// `max |M_self - M_other|`.
    pub fn exponent_gap(&self, other: &GaussPoly) -> f64 {
        (&self.m - &other.m).max_abs()
    }

    fn check_same_exponent(&self, other: &GaussPoly) -> Result<()> {
        let gap = self.exponent_gap(other);
        if gap > M_MATCH_TOL * self.m.entry_scale() {
            return Err(Error::MExponentMismatch { residual: gap });
        }
        Ok(())
    }

    /// Sum of two functions sharing the exponent.
    pub fn add(&self, other: &GaussPoly) -> Result<GaussPoly> {
        self.check_same_exponent(other)?;
        Ok(GaussPoly { poly: self.poly.add(&other.poly), m: self.m.clone() })
    }

    pub fn sub(&self, other: &GaussPoly) -> Result<GaussPoly> {
        self.check_same_exponent(other)?;
        Ok(GaussPoly { poly: self.poly.sub(&other.poly), m: self.m.clone() })
    }

    /// Coefficient distance, defined when the exponents agree.
    pub fn max_coeff_distance(&self, other: &GaussPoly) -> Result<f64> {
        self.check_same_exponent(other)?;
        Ok(self.poly.max_coeff_distance(&other.poly))
    }

    /// Coefficient distance relative to the larger coefficient magnitude.
    pub fn relative_distance(&self, other: &GaussPoly) -> Result<f64> {
        let d = self.max_coeff_distance(other)?;
        let scale = self.poly.max_abs_coeff().max(other.poly.max_abs_coeff());
        Ok(if scale == 0.0 { d } else { d / scale })
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        evaluate(self, z)
    }
}

/// `P(z) exp(-<z,Mz>)`.
pub fn evaluate(gp: &GaussPoly, z: &[Complex64]) -> Complex64 {
    gp.poly.evaluate(z) * (-crate::matrix::bilinear(z, &gp.m, z)).exp()
}

#[derive(Serialize, Deserialize)]
struct GaussPolyRepr {
    terms: Vec<(MultiIndex, [f64; 2])>,
    m: NestedMatrix,
}

impl Serialize for GaussPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaussPolyRepr {
            terms: self.poly.terms().map(|(a, c)| (a.clone(), complex_to_pair(*c))).collect(),
            m: matrix_to_nested(&self.m),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = GaussPolyRepr::deserialize(d)?;
        let m = matrix_from_nested(&repr.m).map_err(D::Error::custom)?;
        let n = m.nrows();
        if repr.terms.iter().any(|(a, _)| a.dim() != n) {
            return Err(D::Error::custom("multi-index dimension does not match M"));
        }
        Ok(GaussPoly { poly: PolyC::from_terms(n, repr.terms.into_iter().map(|(a, c)| (a, pair_to_complex(c)))), m })
    }
}

/// Operator vector `G ∂/∂z + H z`; component `i` is
/// `Σ_k G_ik ∂/∂z_k + Σ_l H_il z_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearDiffOp {
    pub g: ComplexMatrix,
    pub h: ComplexMatrix,
}

impl LinearDiffOp {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Applies component `i`.
    pub fn apply(&self, i: usize, gp: &GaussPoly) -> Result<GaussPoly> {
        apply_op(self, i, gp)
    }
}

/// Exact symbolic application of component `i` of `op`, using
/// `∂/∂z_k (P e^{-<z,Mz>}) = (∂P/∂z_k - 2 (Mz)_k P) e^{-<z,Mz>}`.
pub fn apply_op(op: &LinearDiffOp, i: usize, gp: &GaussPoly) -> Result<GaussPoly> {
    let n = gp.dim();
    if op.g.shape() != (n, n) || op.h.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("operator is {}-dimensional, function {n}-dimensional", op.dim())));
    }
    if i >= n {
        return Err(Error::DimensionMismatch(format!("component {i} out of range for n = {n}")));
    }
    let mut out = PolyC::zero(n);
    let p_scale = gp.poly.max_abs_coeff();
    let mut raw_scale: f64 = 0.0;
    for k in 0..n {
        let g = op.g[(i, k)];
        if g != Complex64::new(0.0, 0.0) {
            let d = gp.poly.derivative(k);
            raw_scale = raw_scale.max(g.norm() * d.max_abs_coeff());
            out = out.add(&d.scale(g));
        }
    }
    // multiplication part: Σ_l (H_il - 2 Σ_k G_ik M_kl) z_l P
    for l in 0..n {
        let mut coeff = op.h[(i, l)];
        let mut contrib = op.h[(i, l)].norm();
        for k in 0..n {
            let t = op.g[(i, k)] * gp.m[(k, l)] * 2.0;
            coeff -= t;
            contrib = contrib.max(t.norm());
        }
        raw_scale = raw_scale.max(contrib * p_scale);
        if coeff != Complex64::new(0.0, 0.0) {
            out = out.add(&gp.poly.mul_var(l).scale(coeff));
        }
    }
    out.prune(PRUNE_REL, raw_scale.max(out.max_abs_coeff()));
    Ok(GaussPoly { poly: out, m: gp.m.clone() })
}

/// Applies `(op, component)` pairs right to left, i.e. the last pair acts first.
pub fn apply_chain(steps: &[(&LinearDiffOp, usize)], gp: &GaussPoly) -> Result<GaussPoly> {
    let mut cur = gp.clone();
    for (op, i) in steps.iter().rev() {
        cur = apply_op(op, *i, &cur)?;
    }
    Ok(cur)
}

/// `Λ = ∂/∂z + 2Qz`.
pub fn annihilation_ops(q: &ComplexMatrix) -> LinearDiffOp {
    let n = q.nrows();
    LinearDiffOp { g: ComplexMatrix::identity(n, n), h: q.scale(2.0) }
}

/// Adjoint of `Λ` in the Segal-Bargmann space:
/// `Λ_i* = Σ_{j,k} conj(γ_ij + q_ij) β_jk ∂/∂z_k
///        + 2 Σ_l {conj α_il - Σ_{j,k} conj(γ_ij + q_ij) β_jk γ_kl} z_l`.
pub fn creation_ops(wd: &WeightData, gen: &GeneratorData) -> LinearDiffOp {
    let lead = conj(&(&wd.phi_zz + &gen.q)) * &wd.beta;
    let h = (conj(&wd.phi_zzbar) - &lead * &wd.phi_zz).scale(2.0);
    LinearDiffOp { g: lead, h }
}

/// Principal part `Ξ` of the creation operator (pure derivative).
pub fn xi_ops(gen: &GeneratorData) -> LinearDiffOp {
    let n = gen.q.nrows();
    LinearDiffOp { g: gen.xi_coeff.clone(), h: ComplexMatrix::zeros(n, n) }
}

/// `ψ̃_α = (Λ_1*)^{α_1} ... (Λ_n*)^{α_n} ψ̃_0` for all `|α| <= max_total_degree`.
#[derive(Clone, Debug)]
pub struct HermiteFamily {
    pub rho: f64,
    pub max_degree: usize,
    pub members: BTreeMap<MultiIndex, GaussPoly>,
}

impl HermiteFamily {
    pub fn get(&self, alpha: &MultiIndex) -> Option<&GaussPoly> {
        self.members.get(alpha)
    }

    pub fn ground(&self) -> &GaussPoly {
        self.members.values().next().expect("family always contains ψ̃_0")
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `(2ρ²)^{|α|} α!`, the ratio `‖ψ̃_α‖² / ‖ψ̃_0‖²`.
    pub fn norm_ratio(&self, alpha: &MultiIndex) -> f64 {
        (2.0 * self.rho * self.rho).powi(alpha.degree() as i32) * alpha.factorial()
    }
}

pub fn hermite_family(wd: &WeightData, gen: &GeneratorData, max_total_degree: usize) -> HermiteFamily {
    hermite_family_with(wd, gen, max_total_degree, Exec::default())
}

/// Builds the family level by level: each `ψ̃_α` with `|α| = d` is
/// `Λ_i* ψ̃_{α - e_i}` for the first nonzero index `i`. Members of one level are
/// independent and are computed under `exec`.
pub fn hermite_family_with(wd: &WeightData, gen: &GeneratorData, max_total_degree: usize, exec: Exec) -> HermiteFamily {
    let n = wd.n;
    let create = creation_ops(wd, gen);
    let mut members = BTreeMap::new();
    members.insert(MultiIndex::zero(n), GaussPoly::gaussian(gen.q.clone()));
    for d in 1..=max_total_degree {
        let level = MultiIndex::of_degree(n, d);
        let built = exec.map(&level, |alpha| {
            let i = alpha.leading_index().expect("degree >= 1");
            let prev = &members[&alpha.minus_unit(i).expect("component is positive")];
            apply_op(&create, i, prev).expect("dimensions agree by construction")
        });
        members.extend(level.into_iter().zip(built));
    }
    HermiteFamily { rho: gen.rho, max_degree: max_total_degree, members }
}

/// `e^{<z,Sz>} Ξ^α e^{-<z,(S+Q)z>}` computed symbolically; the exponent of the
/// result is `(S+Q) - S`.
pub fn rodrigues(_wd: &WeightData, gen: &GeneratorData, alpha: &MultiIndex) -> Result<GaussPoly> {
    let n = gen.q.nrows();
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch(format!("multi-index has {} components, expected {n}", alpha.dim())));
    }
    let xi = xi_ops(gen);
    let mut cur = GaussPoly::gaussian(gen.sq.clone());
    for i in (0..n).rev() {
        for _ in 0..alpha.get(i) {
            cur = apply_op(&xi, i, &cur)?;
        }
    }
    Ok(GaussPoly { poly: cur.poly, m: &gen.sq - &gen.s })
}

/// `H_ρ gp = Σ_i Λ_i*(Λ_i gp) + ρ² gp`.
pub fn hamiltonian_apply(wd: &WeightData, gen: &GeneratorData, gp: &GaussPoly) -> Result<GaussPoly> {
    let gap = (&gp.m - &gen.q).max_abs();
    if gap > M_MATCH_TOL * gen.q.entry_scale() {
        return Err(Error::MExponentMismatch { residual: gap });
    }
    let ann = annihilation_ops(&gen.q);
    let create = creation_ops(wd, gen);
    let mut acc = gp.scale(real(gen.rho2()));
    for i in 0..wd.n {
        let term = apply_op(&create, i, &apply_op(&ann, i, gp)?)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}
