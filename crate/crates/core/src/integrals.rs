//! Exact weighted inner products `(F,G) = ∫ F conj(G) e^{-2Φ} L(dz)` for
//! polynomial-times-Gaussian arguments, evaluated through centered Gaussian
//! moments (Isserlis' theorem) in real coordinates `w = (x_1..x_n, y_1..y_n)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::RwLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::gauss_poly::{annihilation_ops, apply_op, creation_ops};
use crate::matrix::{conj, real, real_embedding};
use crate::{ComplexMatrix, Error, Exec, GaussPoly, GeneratorData, HermiteFamily, MatrixExt, MultiIndex, PolyC, Result, WeightData};

/// Default cap on the total real degree of a moment.
pub const DEFAULT_DEGREE_CAP: usize = 24;

/// Relative size of the imaginary part tolerated in the combined exponent.
const IMAG_TOL: f64 = 1e-10;

/// Real Gaussian `e^{-wᵀ M_R w}` on `ℝ^{2n}` with its total mass
/// `π^n (det M_R)^{-1/2}`.
#[derive(Clone, Debug)]
pub struct RealQuadraticForm {
    pub m_r: DMatrix<f64>,
    pub normalizer: f64,
}

impl RealQuadraticForm {
    /// Combined exponent of `F conj(G) e^{-2Φ}` where `F, G` carry
    /// exponents `m_f`, `m_g`.
    pub fn combined(m_f: &ComplexMatrix, m_g: &ComplexMatrix, wd: &WeightData) -> Result<Self> {
        let n = wd.n;
        if m_f.shape() != (n, n) || m_g.shape() != (n, n) {
            return Err(Error::DimensionMismatch("exponent matrices must be n x n".into()));
        }
        let j = real_embedding(n);
        let jt = j.transpose();
        let jbar = conj(&j);
        let phi_zz_part = &jt * &wd.phi_zz * &j;
        let total = &jt * m_f * &j
            + conj(&(&jt * m_g * &j))
            + (&jt * &wd.phi_zzbar * &jbar).scale(2.0)
            + &phi_zz_part
            + conj(&phi_zz_part);
        let total = (&total + total.transpose()).scale(0.5);
        let imag = total.map(|z| z.im).abs().max();
        if imag > IMAG_TOL * total.entry_scale() {
            return Err(Error::NonIntegrableWeight(format!(
                "exponents of the two factors do not combine to a real Gaussian (imaginary part {imag:.3e})"
            )));
        }
        Self::from_real(total.map(|z| z.re))
    }

    pub fn from_real(m_r: DMatrix<f64>) -> Result<Self> {
        let d = m_r.nrows();
        let chol = m_r
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NonIntegrableWeight("combined quadratic form is not positive definite".into()))?;
        let det: f64 = chol.l().diagonal().iter().map(|v| v * v).product();
        let normalizer = PI.powf(d as f64 / 2.0) / det.sqrt();
        Ok(RealQuadraticForm { m_r, normalizer })
    }

    /// Covariance `(2 M_R)^{-1}` of the normalized density.
    pub fn covariance(&self) -> DMatrix<f64> {
        let inv = self.m_r.clone().cholesky().expect("checked positive definite").inverse();
        let cov = inv * 0.5;
        (&cov + cov.transpose()) * 0.5
    }
}

/// Memoized centered Gaussian moments `E[w^β]`.
#[derive(Debug)]
pub struct MomentCache {
    pub covariance: DMatrix<f64>,
    pub cap: usize,
    memo: RwLock<HashMap<Vec<u32>, f64>>,
}

impl MomentCache {
    pub fn new(covariance: DMatrix<f64>, cap: usize) -> Self {
        MomentCache { covariance, cap, memo: RwLock::new(HashMap::new()) }
    }

    pub fn dim(&self) -> usize {
        self.covariance.nrows()
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn moment(&self, beta: &mut Vec<u32>) -> f64 {
        let total: u32 = beta.iter().sum();
        if total == 0 {
            return 1.0;
        }
        if total % 2 == 1 {
            return 0.0;
        }
        if let Some(v) = self.memo.read().expect("memo lock").get(beta.as_slice()) {
            return *v;
        }
        // E[w_j w^{β'}] = Σ_k Σ_jk β'_k E[w^{β' - e_k}], β' = β - e_j
        let j = beta.iter().position(|&b| b > 0).expect("total > 0");
        let key = beta.clone();
        beta[j] -= 1;
        let mut acc = 0.0;
        for k in 0..beta.len() {
            if beta[k] == 0 {
                continue;
            }
            let s = self.covariance[(j, k)];
            if s == 0.0 {
                continue;
            }
            let mult = f64::from(beta[k]);
            beta[k] -= 1;
            acc += s * mult * self.moment(beta);
            beta[k] += 1;
        }
        beta[j] += 1;
        self.memo.write().expect("memo lock").insert(key, acc);
        acc
    }
}

/// Centered Gaussian moment `E[w^β]` under `mc.covariance`.
pub fn wick_moment(mc: &MomentCache, beta: &[u32]) -> Result<f64> {
    if beta.len() != mc.dim() {
        return Err(Error::DimensionMismatch(format!("moment index has {} entries, covariance is {}", beta.len(), mc.dim())));
    }
    let degree: usize = beta.iter().map(|&b| b as usize).sum();
    if degree > mc.cap {
        return Err(Error::DegreeCapExceeded { degree, cap: mc.cap });
    }
    Ok(mc.moment(&mut beta.to_vec()))
}

/// Polynomial in the real coordinates `w = (x, y)` with complex coefficients.
#[derive(Clone, Debug, Default)]
pub struct RealPoly {
    terms: BTreeMap<Vec<u32>, Complex64>,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

impl RealPoly {
    /// Expands `P(z)` (or `conj(P(z))` when `conjugate`) with `z = x + iy`.
    pub fn from_holomorphic(p: &PolyC, conjugate: bool) -> Self {
        let n = p.dim();
        let unit = if conjugate { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) };
        let mut out = RealPoly::default();
        for (alpha, c) in p.terms() {
            let c = if conjugate { c.conj() } else { *c };
            // expand Π_j (x_j ± i y_j)^{a_j} variable by variable
            let mut partial: Vec<(Vec<u32>, Complex64)> = vec![(vec![0; 2 * n], c)];
            for (j, &a) in alpha.components().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut next = Vec::with_capacity(partial.len() * (a as usize + 1));
                for (idx, coef) in &partial {
                    for k in 0..=a {
                        let mut e = idx.clone();
                        e[j] += a - k;
                        e[n + j] += k;
                        next.push((e, coef * unit.powu(k) * binomial(a, k)));
                    }
                }
                partial = next;
            }
            for (e, v) in partial {
                *out.terms.entry(e).or_default() += v;
            }
        }
        out
    }

    pub fn mul(&self, other: &RealPoly) -> RealPoly {
        let mut out = RealPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *out.terms.entry(e).or_default() += ca * cb;
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&v| v as usize).sum()).max().unwrap_or(0)
    }

    /// `E[P(w)]` under the cache's Gaussian.
    pub fn expectation(&self, mc: &MomentCache) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c * wick_moment(mc, e)?;
        }
        Ok(acc)
    }
}

/// Inner products against a fixed pair of exponents, sharing one moment cache.
#[derive(Debug)]
pub struct InnerProductEngine {
    pub form: RealQuadraticForm,
    pub cache: MomentCache,
    m_f: ComplexMatrix,
    m_g: ComplexMatrix,
}

impl InnerProductEngine {
    pub fn new(m_f: &ComplexMatrix, m_g: &ComplexMatrix, wd: &WeightData, cap: usize) -> Result<Self> {
        let form = RealQuadraticForm::combined(m_f, m_g, wd)?;
        let cache = MomentCache::new(form.covariance(), cap);
        Ok(InnerProductEngine { form, cache, m_f: m_f.clone(), m_g: m_g.clone() })
    }

    fn check(&self, f: &GaussPoly, g: &GaussPoly) -> Result<()> {
        let gap = (&f.m - &self.m_f).max_abs().max((&g.m - &self.m_g).max_abs());
        if gap > crate::gauss_poly::M_MATCH_TOL * self.m_f.entry_scale().max(self.m_g.entry_scale()) {
            return Err(Error::MExponentMismatch { residual: gap });
        }
        Ok(())
    }

    pub fn inner(&self, f: &GaussPoly, g: &GaussPoly) -> Result<Complex64> {
        self.check(f, g)?;
        self.inner_expanded(&RealPoly::from_holomorphic(&f.poly, false), &RealPoly::from_holomorphic(&g.poly, true))
    }

    /// Inner product from pre-expanded `P_F(w)` and `conj(P_G(w))`.
    pub fn inner_expanded(&self, f: &RealPoly, g_conj: &RealPoly) -> Result<Complex64> {
        Ok(f.mul(g_conj).expectation(&self.cache)? * self.form.normalizer)
    }
}

/// `(F, G)_{H_Φ}`.
pub fn hphi_inner(f: &GaussPoly, g: &GaussPoly, wd: &WeightData) -> Result<Complex64> {
    InnerProductEngine::new(&f.m, &g.m, wd, DEFAULT_DEGREE_CAP.max(f.poly.degree() + g.poly.degree()))?.inner(f, g)
}

/// `‖F‖²_{H_Φ}`.
pub fn hphi_norm_sq(f: &GaussPoly, wd: &WeightData) -> Result<f64> {
    Ok(hphi_inner(f, f, wd)?.re)
}

/// Gram matrix of a family, rows and columns in graded lexicographic order.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub indices: Vec<MultiIndex>,
    pub entries: DMatrix<Complex64>,
}

impl GramMatrix {
    /// Largest deviation from `δ_{αβ}(2ρ²)^{|α|} α! ‖ψ̃_0‖²`, relative to the
    /// corresponding diagonal entry `G_{αα}`: `(max_offdiag, max_diag)`.
    pub fn orthogonality_errors(&self, family: &HermiteFamily) -> (f64, f64) {
        let norm0 = self.entries[(0, 0)].re;
        let mut off: f64 = 0.0;
        let mut diag: f64 = 0.0;
        for (i, a) in self.indices.iter().enumerate() {
            let expected = family.norm_ratio(a) * norm0;
            for j in 0..self.indices.len() {
                let g = self.entries[(i, j)];
                if i == j {
                    diag = diag.max((g - real(expected)).norm() / expected);
                } else {
                    let scale = self.entries[(i, i)].re.max(self.entries[(j, j)].re);
                    off = off.max(g.norm() / scale);
                }
            }
        }
        (off, diag)
    }
}

pub fn gram_matrix(family: &HermiteFamily, wd: &WeightData) -> Result<GramMatrix> {
    gram_matrix_with(family, wd, Exec::default())
}

/// Entries `(ψ̃_α, ψ̃_β)` for every ordered pair, rows computed under `exec`.
pub fn gram_matrix_with(family: &HermiteFamily, wd: &WeightData, exec: Exec) -> Result<GramMatrix> {
    let indices: Vec<MultiIndex> = family.members.keys().cloned().collect();
    let m = family.ground().m.clone();
    let cap = DEFAULT_DEGREE_CAP.max(2 * family.max_degree);
    let engine = InnerProductEngine::new(&m, &m, wd, cap)?;
    for gp in family.members.values() {
        engine.check(gp, gp)?;
    }
    let plain: Vec<RealPoly> = family.members.values().map(|gp| RealPoly::from_holomorphic(&gp.poly, false)).collect();
    let conjd: Vec<RealPoly> = family.members.values().map(|gp| RealPoly::from_holomorphic(&gp.poly, true)).collect();
    let len = indices.len();
    let rows = exec.map_range(len, |i| {
        (0..len).map(|j| engine.inner_expanded(&plain[i], &conjd[j])).collect::<Result<Vec<_>>>()
    });
    let mut entries = DMatrix::zeros(len, len);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            entries[(i, j)] = v;
        }
    }
    Ok(GramMatrix { indices, entries })
}

/// `|(Λ_i F, G) - (F, Λ_i* G)|`.
pub fn adjoint_residual(wd: &WeightData, gen: &GeneratorData, f: &GaussPoly, g: &GaussPoly, i: usize) -> Result<f64> {
    let lf = apply_op(&annihilation_ops(&gen.q), i, f)?;
    let cg = apply_op(&creation_ops(wd, gen), i, g)?;
    let lhs = hphi_inner(&lf, g, wd)?;
    let rhs = hphi_inner(f, &cg, wd)?;
    Ok((lhs - rhs).norm())
}

/// Coefficients of `F` against the normalized family and the norm of what
/// the projection leaves over.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub coefficients: BTreeMap<MultiIndex, Complex64>,
    /// `‖F - Σ c_α ψ_α‖_{H_Φ}`.
    pub residual: f64,
    /// `‖F‖_{H_Φ}`.
    pub norm: f64,
}

/// Normalized member `ψ_α = ψ̃_α / (sqrt((2ρ²)^{|α|} α!) ‖ψ̃_0‖)`.
pub fn normalized_member(family: &HermiteFamily, alpha: &MultiIndex, norm0: f64) -> Option<GaussPoly> {
    let gp = family.get(alpha)?;
    Some(gp.scale(real(1.0 / (family.norm_ratio(alpha).sqrt() * norm0))))
}

pub fn expand_in_family(f: &GaussPoly, family: &HermiteFamily, wd: &WeightData) -> Result<Expansion> {
    let needed = f.poly.degree();
    if family.max_degree < needed {
        return Err(Error::IncompleteFamily { needed, available: family.max_degree });
    }
    let m = family.ground().m.clone();
    let engine = InnerProductEngine::new(&m, &m, wd, DEFAULT_DEGREE_CAP.max(needed + family.max_degree))?;
    let norm0 = engine.inner(family.ground(), family.ground())?.re.sqrt();
    let mut coefficients = BTreeMap::new();
    let mut approx = PolyC::zero(wd.n);
    for alpha in family.members.keys().filter(|a| a.degree() <= needed) {
        let psi = normalized_member(family, alpha, norm0).expect("member exists");
        let c = engine.inner(f, &psi)?;
        approx = approx.add(&psi.poly.scale(c));
        coefficients.insert(alpha.clone(), c);
    }
    let diff = GaussPoly { poly: f.poly.sub(&approx), m: m.clone() };
    let residual = engine.inner(&diff, &diff)?.re.max(0.0).sqrt();
    let norm = engine.inner(f, f)?.re.max(0.0).sqrt();
    Ok(Expansion { coefficients, residual, norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_poly::hermite_family;
    use crate::matrix::I;
    use crate::model::{self, build_generator, compute_weight_data, phase_intertwiner, validate_phase_triple};
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-10;

    fn weight(abc: (ComplexMatrix, ComplexMatrix, ComplexMatrix)) -> WeightData {
        let pt = validate_phase_triple(&abc.0, &abc.1, &abc.2, TOL).unwrap();
        compute_weight_data(&pt, TOL).unwrap()
    }

    fn em_half() -> (WeightData, GeneratorData) {
        let wd = weight(model::em_triple(0.5, 0.0)).with_eigenbasis(ComplexMatrix::from_element(1, 1, I), TOL).unwrap();
        let gen = build_generator(&wd, (1.0f64 / 3.0).sqrt(), &phase_intertwiner(&[0.0]), TOL).unwrap();
        (wd, gen)
    }

    fn ghs_half() -> (WeightData, GeneratorData) {
        let wd = weight(model::ghs_triple(0.5)).with_eigenbasis(ComplexMatrix::identity(2, 2).map(|z| z * I), TOL).unwrap();
        let gen = build_generator(&wd, (1.0f64 / 6.0).sqrt(), &model::swap_matrix(), TOL).unwrap();
        (wd, gen)
    }

    /// Sum over all perfect pairings of the factor list; independent of the
    /// recursion in `MomentCache`.
    fn pairing_oracle(cov: &DMatrix<f64>, factors: &[usize]) -> f64 {
        if factors.is_empty() {
            return 1.0;
        }
        if factors.len() % 2 == 1 {
            return 0.0;
        }
        let first = factors[0];
        let mut acc = 0.0;
        for k in 1..factors.len() {
            let rest: Vec<usize> = factors[1..].iter().enumerate().filter(|(i, _)| *i + 1 != k).map(|(_, v)| *v).collect();
            acc += cov[(first, factors[k])] * pairing_oracle(cov, &rest);
        }
        acc
    }

    fn sample_cov() -> DMatrix<f64> {
        DMatrix::from_row_slice(3, 3, &[1.3, 0.4, -0.2, 0.4, 0.9, 0.1, -0.2, 0.1, 0.7])
    }

    #[test]
    fn odd_and_second_moments() {
        let mc = MomentCache::new(sample_cov(), DEFAULT_DEGREE_CAP);
        assert_eq!(wick_moment(&mc, &[1, 2, 0]).unwrap(), 0.0);
        assert_eq!(wick_moment(&mc, &[2, 0, 0]).unwrap(), 1.3);
    }

    #[test]
    fn fourth_moment_three_pairings() {
        let cov = sample_cov();
        let mc = MomentCache::new(cov.clone(), DEFAULT_DEGREE_CAP);
        let expected = cov[(0, 0)] * cov[(1, 1)] + 2.0 * cov[(0, 1)].powi(2);
        assert_relative_eq!(wick_moment(&mc, &[2, 2, 0]).unwrap(), expected, max_relative = 1e-15);
    }

    #[test]
    fn recursion_agrees_with_pairing_enumeration() {
        let cov = sample_cov();
        let mc = MomentCache::new(cov.clone(), DEFAULT_DEGREE_CAP);
        for beta in [[2u32, 1, 1], [3, 1, 2], [0, 4, 2], [1, 1, 4], [2, 2, 2]] {
            let factors: Vec<usize> = beta.iter().enumerate().flat_map(|(i, &b)| std::iter::repeat_n(i, b as usize)).collect();
            let oracle = pairing_oracle(&cov, &factors);
            assert_relative_eq!(wick_moment(&mc, &beta).unwrap(), oracle, max_relative = 1e-13);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let mc = MomentCache::new(sample_cov(), 4);
        assert!(matches!(wick_moment(&mc, &[2, 2, 2]), Err(Error::DegreeCapExceeded { degree: 6, cap: 4 })));
    }

    #[test]
    fn ground_norm_em() {
        // exponent -(1/2) x² - y² → √(2π) · √π = π√2
        let (wd, gen) = em_half();
        let psi0 = GaussPoly::gaussian(gen.q.clone());
        assert_relative_eq!(hphi_norm_sq(&psi0, &wd).unwrap(), PI * 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn standard_monomial_norms() {
        // ∫ |z|^{2k} e^{-|z|²/2} L(dz) = 2π 2^k k!
        let wd = weight(model::standard_triple(1));
        let zero = ComplexMatrix::zeros(1, 1);
        for k in 0..=8u32 {
            let zk = GaussPoly::new(PolyC::monomial(MultiIndex::new(vec![k]), real(1.0)), zero.clone());
            let fact: f64 = (1..=k).map(f64::from).product();
            let expected = 2.0 * PI * 2f64.powi(k as i32) * fact;
            assert_relative_eq!(hphi_norm_sq(&zk, &wd).unwrap(), expected, max_relative = 1e-12);
        }
        let z1 = GaussPoly::new(PolyC::monomial(MultiIndex::new(vec![1]), real(1.0)), zero.clone());
        let z2 = GaussPoly::new(PolyC::monomial(MultiIndex::new(vec![2]), real(1.0)), zero);
        assert!(hphi_inner(&z1, &z2, &wd).unwrap().norm() < 1e-13);
    }

    #[test]
    fn em_gram_matrix() {
        let (wd, gen) = em_half();
        let fam = hermite_family(&wd, &gen, 2);
        let gram = gram_matrix(&fam, &wd).unwrap();
        let base = PI * 2f64.sqrt();
        let expected = [1.0, 2.0 / 3.0, (2.0f64 / 3.0).powi(2) * 2.0];
        for (k, e) in expected.iter().enumerate() {
            assert_relative_eq!(gram.entries[(k, k)].re, e * base, max_relative = 1e-12);
        }
        let (off, diag) = gram.orthogonality_errors(&fam);
        assert!(off < 1e-12 && diag < 1e-12, "{off} {diag}");
        assert!(hphi_inner(&fam.members[&MultiIndex::new(vec![1])], fam.ground(), &wd).unwrap().norm() < 1e-14);
    }

    #[test]
    fn ghs_cross_terms_vanish() {
        let (wd, gen) = ghs_half();
        let fam = hermite_family(&wd, &gen, 1);
        let a = &fam.members[&MultiIndex::new(vec![1, 0])];
        let b = &fam.members[&MultiIndex::new(vec![0, 1])];
        let c = hphi_inner(a, b, &wd).unwrap();
        assert!(c.norm() < 1e-13 * hphi_norm_sq(a, &wd).unwrap());
    }

    #[test]
    fn adjoint_examples() {
        let (wd, gen) = em_half();
        let psi0 = GaussPoly::gaussian(gen.q.clone());
        assert!(adjoint_residual(&wd, &gen, &psi0, &psi0, 0).unwrap() <= 1e-10);
        let zpsi = psi0.mul_monomial(&MultiIndex::new(vec![1]));
        let scale = hphi_norm_sq(&zpsi, &wd).unwrap().sqrt() * hphi_norm_sq(&psi0, &wd).unwrap().sqrt();
        assert!(adjoint_residual(&wd, &gen, &zpsi, &psi0, 0).unwrap() <= 1e-8 * scale);
    }

    #[test]
    fn expansion_examples() {
        let (wd, gen) = em_half();
        let fam = hermite_family(&wd, &gen, 3);
        let psi0 = fam.ground().clone();
        let e0 = expand_in_family(&psi0, &fam, &wd).unwrap();
        assert_relative_eq!(e0.coefficients[&MultiIndex::zero(1)].re, e0.norm, max_relative = 1e-13);
        assert!(e0.residual <= 1e-10);

        let z = psi0.mul_monomial(&MultiIndex::new(vec![1]));
        let e1 = expand_in_family(&z, &fam, &wd).unwrap();
        assert!(e1.residual <= 1e-8);
        assert!(e1.coefficients[&MultiIndex::zero(1)].norm() < 1e-13);
        assert!(e1.coefficients[&MultiIndex::new(vec![1])].norm() > 0.1);

        let z2 = psi0.mul_monomial(&MultiIndex::new(vec![2]));
        let e2 = expand_in_family(&z2, &fam, &wd).unwrap();
        assert!(e2.residual <= 1e-8);
        assert!(e2.coefficients[&MultiIndex::new(vec![1])].norm() < 1e-13);
        assert!(e2.coefficients[&MultiIndex::zero(1)].norm() > 0.1);

        let short = hermite_family(&wd, &gen, 1);
        assert!(matches!(expand_in_family(&z2, &short, &wd), Err(Error::IncompleteFamily { needed: 2, available: 1 })));
    }

    #[test]
    fn mismatched_exponents_are_rejected() {
        let (wd, gen) = em_half();
        let psi0 = GaussPoly::gaussian(gen.q.clone());
        let other = GaussPoly::gaussian(ComplexMatrix::from_element(1, 1, Complex64::new(0.5, 0.3)));
        assert!(matches!(hphi_inner(&psi0, &other, &wd), Err(Error::NonIntegrableWeight(_))));
        let blowup = GaussPoly::gaussian(ComplexMatrix::from_element(1, 1, real(-5.0)));
        assert!(matches!(hphi_inner(&blowup, &blowup, &wd), Err(Error::NonIntegrableWeight(_))));
    }
}
