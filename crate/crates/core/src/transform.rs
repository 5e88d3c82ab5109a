//! The Bargmann-type transform `T`, its inverse `T*`, the reproducing
//! kernel `K_Φ` and numerical isometry checks.
//!
//! `Tu(z) = C_φ ∫ e^{iφ(z,x)} u(x) dx` with
//! `φ(z,x) = <z,Az>/2 + <z,Bx> + <x,Cx>/2`, and
//! `T*F(x) = C_φ ∫ e^{-i conj φ(z,x)} F(z) e^{-2Φ(z)} L(dz)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::integrals::{hphi_norm_sq, RealQuadraticForm};
use crate::matrix::{self, conj, real, real_embedding, I};
use crate::quadrature::{integrate_entire, integrate_entire_value, integrate_gaussian, ComplexGaussian, QuadResult};
use crate::{ComplexMatrix, Error, Exec, GaussPoly, MultiIndex, PhaseTriple, PolyC, Result, WeightData};

/// Largest `n` for which `T*` quadrature over `ℝ^{2n}` is attempted.
pub const MAX_INVERSE_DIM: usize = 2;

/// Relative least-squares residual above which a fitted `Tu` is rejected.
pub const FIT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSpec {
    /// Gauss–Hermite nodes per real axis.
    pub nodes: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { nodes: 64 }
    }
}

/// Values `p_0..=p_k` at `x` of the polynomial parts of the normalized
/// Hermite functions `h_k(x) = p_k(x) e^{-x²/2}`.
pub fn hermite_polys(k: usize, x: Complex64) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(k + 1);
    p.push(real(PI.powf(-0.25)));
    if k >= 1 {
        p.push(x * 2f64.sqrt() * p[0]);
    }
    for j in 1..k {
        let jf = j as f64;
        let next = x * (2.0 / (jf + 1.0)).sqrt() * p[j] - p[j - 1] * (jf / (jf + 1.0)).sqrt();
        p.push(next);
    }
    p
}

/// A finite expansion `u = Σ c_α h_α` in tensor Hermite functions.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub n: usize,
    pub coefficients: BTreeMap<MultiIndex, Complex64>,
}

impl TestFunction {
    pub fn zero(n: usize) -> Self {
        TestFunction { n, coefficients: BTreeMap::new() }
    }

    pub fn hermite(alpha: MultiIndex) -> Self {
        let n = alpha.dim();
        TestFunction { n, coefficients: BTreeMap::from([(alpha, real(1.0))]) }
    }

    pub fn from_coefficients(n: usize, coefficients: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let coefficients: BTreeMap<_, _> = coefficients.into_iter().collect();
        if coefficients.keys().any(|a| a.dim() != n) {
            return Err(Error::DimensionMismatch("Hermite index dimension differs from n".into()));
        }
        Ok(TestFunction { n, coefficients })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Exact `‖u‖²_{L²}` by orthonormality.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn linear_combination(&self, a: Complex64, other: &TestFunction, b: Complex64) -> TestFunction {
        let mut coefficients = BTreeMap::new();
        for (k, v) in &self.coefficients {
            *coefficients.entry(k.clone()).or_insert(real(0.0)) += v * a;
        }
        for (k, v) in &other.coefficients {
            *coefficients.entry(k.clone()).or_insert(real(0.0)) += v * b;
        }
        TestFunction { n: self.n, coefficients }
    }

    /// `u(x) e^{|x|²/2}`, an entire function of `x`.
    pub fn polynomial_part(&self, x: &[Complex64]) -> Complex64 {
        let max_k = self.coefficients.keys().flat_map(|a| a.components().iter().copied()).max().unwrap_or(0) as usize;
        let tables: Vec<Vec<Complex64>> = x.iter().map(|&xi| hermite_polys(max_k, xi)).collect();
        self.coefficients
            .iter()
            .map(|(alpha, c)| {
                alpha.components().iter().enumerate().fold(*c, |acc, (j, &a)| acc * tables[j][a as usize])
            })
            .sum()
    }

    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        let xc: Vec<Complex64> = x.iter().map(|&v| real(v)).collect();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        self.polynomial_part(&xc) * (-0.5 * r2).exp()
    }
}

fn check_dim(n: usize, len: usize, what: &str) -> Result<()> {
    if n != len {
        return Err(Error::DimensionMismatch(format!("{what} has {len} entries, expected {n}")));
    }
    Ok(())
}

fn transform_gaussian(pt: &PhaseTriple, z: &[Complex64]) -> ComplexGaussian {
    let n = pt.n;
    let m = (ComplexMatrix::identity(n, n) - pt.c.map(|v| v * I)).scale(0.5);
    let zt = DVector::from_column_slice(z);
    let l = (pt.b.transpose() * &zt).map(|v| v * I);
    let c = matrix::bilinear(z, &pt.a, z) * I * 0.5 + pt.c_phi.ln();
    ComplexGaussian { m, l: l.iter().copied().collect(), c }
}

/// Quadrature approximation of `Tu(z)`.
pub fn transform(pt: &PhaseTriple, u: &TestFunction, z: &[Complex64], quad: &QuadSpec) -> Result<QuadResult> {
    transform_with(pt, u, z, quad, Exec::default())
}

pub fn transform_with(pt: &PhaseTriple, u: &TestFunction, z: &[Complex64], quad: &QuadSpec, exec: Exec) -> Result<QuadResult> {
    check_dim(pt.n, u.n, "test function")?;
    check_dim(pt.n, z.len(), "z")?;
    integrate_entire(&transform_gaussian(pt, z), |x| u.polynomial_part(x), quad.nodes, exec)
}

fn transform_value(pt: &PhaseTriple, u: &TestFunction, z: &[Complex64], quad: &QuadSpec) -> Result<Complex64> {
    integrate_entire_value(&transform_gaussian(pt, z), |x| u.polynomial_part(x), quad.nodes, Exec::Sequential)
}

/// `Tu` at many points, one independent quadrature per point.
pub fn transform_many(pt: &PhaseTriple, u: &TestFunction, zs: &[Vec<Complex64>], quad: &QuadSpec, exec: Exec) -> Result<Vec<QuadResult>> {
    check_dim(pt.n, u.n, "test function")?;
    for z in zs {
        check_dim(pt.n, z.len(), "z")?;
    }
    exec.map(zs, |z| transform_with(pt, u, z, quad, Exec::Sequential)).into_iter().collect()
}

fn sym(m: ComplexMatrix) -> ComplexMatrix {
    (&m + m.transpose()).scale(0.5)
}

/// Quadrature approximation of `T*F(x)` over `ℝ^{2n}`, `n ≤ 2`.
pub fn inverse_transform(pt: &PhaseTriple, f: &GaussPoly, x: &[f64], quad: &QuadSpec) -> Result<QuadResult> {
    inverse_transform_with(pt, f, x, quad, Exec::default())
}

pub fn inverse_transform_with(pt: &PhaseTriple, f: &GaussPoly, x: &[f64], quad: &QuadSpec, exec: Exec) -> Result<QuadResult> {
    let n = pt.n;
    check_dim(n, f.dim(), "F")?;
    check_dim(n, x.len(), "x")?;
    if n > MAX_INVERSE_DIM {
        return Err(Error::Unsupported(format!("inverse transform quadrature is limited to n <= {MAX_INVERSE_DIM}")));
    }
    let (phi_zzbar, phi_zz) = pt.phi_hessians();
    let j = real_embedding(n);
    let jt = j.transpose();
    let jbar = conj(&j);
    let jbar_t = jbar.transpose();
    let a_part = (&jbar_t * conj(&pt.a) * &jbar).map(|v| v * I * 0.5);
    let phi_part = &jt * &phi_zz * &j;
    let m = sym(a_part + &jt * &f.m * &j + (&jt * &phi_zzbar * &jbar).scale(2.0) + &phi_part + conj(&phi_part));
    let xc = DVector::from_iterator(n, x.iter().map(|&v| real(v)));
    let l = (&jbar_t * conj(&pt.b) * xc).map(|v| -v * I);
    let xs: Vec<Complex64> = x.iter().map(|&v| real(v)).collect();
    let c = -matrix::bilinear(&xs, &conj(&pt.c), &xs) * I * 0.5 + pt.c_phi.ln();
    let g = ComplexGaussian { m, l: l.iter().copied().collect(), c };
    integrate_entire(&g, |w| f.poly.evaluate(&embed(&j, w)), quad.nodes, exec)
}

/// `z = J w` for `w = (x, y)`.
fn embed(j: &ComplexMatrix, w: &[Complex64]) -> Vec<Complex64> {
    (0..j.nrows()).map(|r| (0..w.len()).map(|k| j[(r, k)] * w[k]).sum()).collect()
}

/// Data of `K_Φ(z,ζ) = C_Φ e^{2Ψ(z,ζ̄)}`.
#[derive(Clone, Debug)]
pub struct KernelParams {
    pub psi_zzbar: ComplexMatrix,
    pub psi_zz: ComplexMatrix,
    pub c_phi: f64,
}

impl KernelParams {
    pub fn from_triple(pt: &PhaseTriple) -> Self {
        let (psi_zzbar, psi_zz) = pt.phi_hessians();
        KernelParams { psi_zzbar, psi_zz, c_phi: pt.c_big_phi() }
    }

    pub fn dim(&self) -> usize {
        self.psi_zz.nrows()
    }

    /// `Ψ(z, ζ̄) = <z, Φ''_{zz̄} ζ̄> + ½<z, Φ''_{zz} z> + ½<ζ̄, conj(Φ''_{zz}) ζ̄>`.
    pub fn psi(&self, z: &[Complex64], zeta_bar: &[Complex64]) -> Complex64 {
        matrix::bilinear(z, &self.psi_zzbar, zeta_bar)
            + matrix::bilinear(z, &self.psi_zz, z) * 0.5
            + matrix::bilinear(zeta_bar, &conj(&self.psi_zz), zeta_bar) * 0.5
    }
}

/// `K_Φ(z, ζ)`.
///
/// # Panics
/// If `z` or `zeta` does not have `kp.dim()` entries.
pub fn kernel_eval(kp: &KernelParams, z: &[Complex64], zeta: &[Complex64]) -> Complex64 {
    assert!(z.len() == kp.dim() && zeta.len() == kp.dim(), "kernel arguments must have length n");
    let zeta_bar: Vec<Complex64> = zeta.iter().map(|v| v.conj()).collect();
    (kp.psi(z, &zeta_bar) * 2.0).exp() * kp.c_phi
}

/// Quadrature of `∫ K_Φ(z,ζ) F(ζ) e^{-2Φ(ζ)} L(dζ)`, which reproduces `F(z)`.
pub fn kernel_reproduce(kp: &KernelParams, f: &GaussPoly, z: &[Complex64], quad: &QuadSpec, exec: Exec) -> Result<QuadResult> {
    let n = kp.dim();
    check_dim(n, f.dim(), "F")?;
    check_dim(n, z.len(), "z")?;
    if n > MAX_INVERSE_DIM {
        return Err(Error::Unsupported(format!("kernel quadrature is limited to n <= {MAX_INVERSE_DIM}")));
    }
    let j = real_embedding(n);
    let jt = j.transpose();
    let jbar = conj(&j);
    // the antiholomorphic quadratic of e^{2Ψ} cancels the one in e^{-2Φ}
    let m = sym(&jt * &f.m * &j + (&jt * &kp.psi_zzbar * &jbar).scale(2.0) + &jt * &kp.psi_zz * &j);
    let zv = DVector::from_column_slice(z);
    let l = (jbar.transpose() * kp.psi_zzbar.transpose() * zv).scale(2.0);
    let c = matrix::bilinear(z, &kp.psi_zz, z) + kp.c_phi.ln();
    let g = ComplexGaussian { m, l: l.iter().copied().collect(), c };
    integrate_entire(&g, |w| f.poly.evaluate(&embed(&j, w)), quad.nodes, exec)
}

/// Exponent `M_T` with `Tu(z) = P(z) e^{-<z, M_T z>}` for every finite
/// Hermite expansion `u`: `M_T = -(i/2)A + ¼ B W⁻¹ ᵗB`, `W = ½(E - iC)`.
pub fn transform_exponent(pt: &PhaseTriple) -> Result<ComplexMatrix> {
    let n = pt.n;
    let w = (ComplexMatrix::identity(n, n) - pt.c.map(|v| v * I)).scale(0.5);
    let winv = matrix::inverse(&w)?;
    Ok(sym(pt.a.map(|v| -v * I * 0.5) + (&pt.b * winv * pt.b.transpose()).scale(0.25)))
}

/// `Tu` recovered as a [`GaussPoly`] from quadrature samples.
#[derive(Clone, Debug)]
pub struct FittedTransform {
    pub gauss_poly: GaussPoly,
    /// `‖V c - y‖ / ‖y‖` of the least-squares fit.
    pub fit_residual: f64,
    pub samples: usize,
}

/// Sample points: per coordinate `0` and `k+2` points on the unit circle,
/// enough for a unisolvent tensor grid at total degree `k`.
fn fit_points(n: usize, degree: usize) -> Vec<Vec<Complex64>> {
    let ring = degree + 2;
    let mut axis = vec![real(0.0)];
    axis.extend((0..ring).map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.25) / ring as f64)));
    let mut pts = vec![Vec::new()];
    for _ in 0..n {
        pts = pts.into_iter().flat_map(|p| axis.iter().map(move |a| [p.clone(), vec![*a]].concat())).collect();
    }
    pts
}

/// Least-squares fit of sampled `Tu(z) e^{<z,M_T z>}` to monomials of degree
/// `deg u + 1`; the surplus degree exposes a mismatched basis.
pub fn fit_transform(pt: &PhaseTriple, u: &TestFunction, quad: &QuadSpec, exec: Exec) -> Result<FittedTransform> {
    check_dim(pt.n, u.n, "test function")?;
    let n = pt.n;
    let m_t = transform_exponent(pt)?;
    let degree = u.degree() + 1;
    let basis = MultiIndex::all_up_to(n, degree);
    let points = fit_points(n, degree);
    let values = exec.map(&points, |z| transform_value(pt, u, z, quad).map(|v| v * matrix::bilinear(z, &m_t, z).exp()));
    let y = DVector::from_iterator(points.len(), values.into_iter().collect::<Result<Vec<_>>>()?);
    let v = DMatrix::from_fn(points.len(), basis.len(), |r, k| PolyC::monomial(basis[k].clone(), real(1.0)).evaluate(&points[r]));
    let ynorm = y.norm();
    let coeffs = if ynorm == 0.0 {
        DVector::zeros(basis.len())
    } else {
        v.clone().svd(true, true).solve(&y, 1e-14).map_err(|_| Error::FitFailure { residual: f64::NAN })?
    };
    let fit_residual = if ynorm == 0.0 { 0.0 } else { (&v * &coeffs - &y).norm() / ynorm };
    if fit_residual.is_nan() || fit_residual > FIT_TOL {
        return Err(Error::FitFailure { residual: fit_residual });
    }
    let poly = PolyC::from_terms(n, basis.into_iter().zip(coeffs.iter().copied()));
    Ok(FittedTransform { gauss_poly: GaussPoly::new(poly, m_t), fit_residual, samples: points.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryMode {
    /// Fit `Tu` to a polynomial times Gaussian, then integrate exactly.
    Fit,
    /// Integrate `|Tu|² e^{-2Φ}` over `ℝ^{2n}` directly.
    Quadrature,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsometryReport {
    /// `|‖Tu‖² - ‖u‖²| / ‖u‖²`.
    pub residual: f64,
    pub transform_norm_sq: f64,
    pub l2_norm_sq: f64,
    pub fit_residual: Option<f64>,
}

pub fn isometry_residual(pt: &PhaseTriple, u: &TestFunction, wd: &WeightData, quad: &QuadSpec, mode: IsometryMode) -> Result<IsometryReport> {
    isometry_residual_with(pt, u, wd, quad, mode, Exec::default())
}

pub fn isometry_residual_with(
    pt: &PhaseTriple,
    u: &TestFunction,
    wd: &WeightData,
    quad: &QuadSpec,
    mode: IsometryMode,
    exec: Exec,
) -> Result<IsometryReport> {
    check_dim(pt.n, u.n, "test function")?;
    check_dim(pt.n, wd.n, "weight data")?;
    let l2_norm_sq = u.l2_norm_sq();
    if l2_norm_sq == 0.0 {
        return Err(Error::Unsupported("isometry residual needs a nonzero test function".into()));
    }
    let (transform_norm_sq, fit_residual) = match mode {
        IsometryMode::Fit => {
            let fit = fit_transform(pt, u, quad, exec)?;
            (hphi_norm_sq(&fit.gauss_poly, wd)?, Some(fit.fit_residual))
        }
        IsometryMode::Quadrature => {
            if pt.n > MAX_INVERSE_DIM {
                return Err(Error::Unsupported(format!("direct quadrature is limited to n <= {MAX_INVERSE_DIM}")));
            }
            let m_t = transform_exponent(pt)?;
            let env = RealQuadraticForm::combined(&m_t, &m_t, wd)?;
            let d = 2 * pt.n;
            let j = real_embedding(pt.n);
            let g = ComplexGaussian { m: env.m_r.map(real), l: vec![real(0.0); d], c: real(0.0) };
            let m_r = env.m_r.clone();
            let integrand = |w: &[Complex64]| {
                let wr: Vec<f64> = w.iter().map(|v| v.re).collect();
                let z = embed(&j, w);
                let quad_form = (0..d).map(|a| (0..d).map(|b| m_r[(a, b)] * wr[a] * wr[b]).sum::<f64>()).sum::<f64>();
                match transform_value(pt, u, &z, quad) {
                    Ok(tu) => real(tu.norm_sqr() * (quad_form - 2.0 * wd.phi(&z)).exp()),
                    Err(_) => real(f64::NAN),
                }
            };
            let r = integrate_gaussian(&g, integrand, quad.nodes, exec)?;
            (r.value.re, None)
        }
    };
    Ok(IsometryReport { residual: (transform_norm_sq - l2_norm_sq).abs() / l2_norm_sq, transform_norm_sq, l2_norm_sq, fit_residual })
}
