//! Defining triples, the weight of the Segal-Bargmann space and the
//! construction of Gaussian generators with canonical commutation relations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::matrix::{self, conj, diag, hermitian_eigen, hermitize, real, symmetrize, I};
use crate::{ComplexMatrix, Error, MatrixExt, Result};

/// Validated phase data `φ(z,x) = <z,Az>/2 + <z,Bx> + <x,Cx>/2`.
#[derive(Clone, Debug)]
pub struct PhaseTriple {
    pub n: usize,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    /// `C_I = (C - conj C) / 2i`.
    pub c_imag: ComplexMatrix,
    /// Prefactor `C_φ = 2^{-n/2} π^{-3n/4} |det B| (det C_I)^{-1/4}`.
    pub c_phi: f64,
}

impl PhaseTriple {
    /// `(Φ''_{zz̄}, Φ''_{zz})` computed from the triple.
    pub fn phi_hessians(&self) -> (ComplexMatrix, ComplexMatrix) {
        let ci_inv = matrix::inverse(&self.c_imag).expect("C_I is positive definite");
        let phi_zzbar = hermitize(&(&self.b * &ci_inv * self.b.adjoint()).scale(0.25));
        let phi_zz = symmetrize(
            &(-(&self.b * &ci_inv * self.b.transpose()).scale(0.25) - self.a.map(|z| z / (2.0 * I))),
        );
        (phi_zzbar, phi_zz)
    }

    /// `|det B|^2 / det C_I`.
    pub fn det_ratio(&self) -> f64 {
        matrix::det(&self.b).norm_sqr() / matrix::det(&self.c_imag).re
    }

    /// Kernel prefactor `C_Φ = (2π)^{-n} |det B|^2 (det C_I)^{-1}`.
    pub fn c_big_phi(&self) -> f64 {
        (2.0 * PI).powi(-(self.n as i32)) * self.det_ratio()
    }
}

pub fn validate_phase_triple(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, tol: f64) -> Result<PhaseTriple> {
    let n = a.nrows();
    for (name, m) in [("A", a), ("B", b), ("C", c)] {
        if n == 0 || m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {n}x{n} with n >= 1",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    if !a.is_symmetric(tol) {
        return Err(Error::NonSymmetricA { residual: a.symmetry_residual() });
    }
    if !c.is_symmetric(tol) {
        return Err(Error::NonSymmetricC { residual: c.symmetry_residual() });
    }
    let det_b = matrix::det(b).norm();
    if det_b < tol {
        return Err(Error::SingularB { det_abs: det_b });
    }
    let c_imag = hermitize(&(c - conj(c)).map(|z| z / (2.0 * I)));
    let (ci_eigs, _) = hermitian_eigen(&c_imag)?;
    if ci_eigs[0] <= tol {
        return Err(Error::NonPositiveCI { min_eig: ci_eigs[0] });
    }
    let det_ci: f64 = ci_eigs.iter().product();
    let nf = n as f64;
    let c_phi = 2f64.powf(-nf / 2.0) * PI.powf(-3.0 * nf / 4.0) * det_b * det_ci.powf(-0.25);
    Ok(PhaseTriple { n, a: symmetrize(a), b: b.clone(), c: symmetrize(c), c_imag, c_phi })
}

/// Second derivatives of the weight `Φ` with the spectral data of `Φ''_{zz̄}`.
#[derive(Clone, Debug)]
pub struct WeightData {
    pub n: usize,
    /// `Φ''_{zz̄}` (entries `α_ij`), Hermitian positive definite.
    pub phi_zzbar: ComplexMatrix,
    /// `Φ''_{zz}` (entries `γ_ij`), complex symmetric.
    pub phi_zz: ComplexMatrix,
    /// `(Φ''_{zz̄})^{-1}` (entries `β_ij`).
    pub beta: ComplexMatrix,
    /// `λ_1 <= ... <= λ_n`, the square roots of the eigenvalues of `Φ''_{zz̄}`.
    pub lambda: Vec<f64>,
    pub lambda0: f64,
    /// Unitary with `Φ''_{zz̄} = U diag(λ²) U*`.
    pub u: ComplexMatrix,
}

pub fn compute_weight_data(pt: &PhaseTriple, _tol: f64) -> Result<WeightData> {
    let (phi_zzbar, phi_zz) = pt.phi_hessians();
    let (eigs, u) = hermitian_eigen(&phi_zzbar)?;
    if eigs[0] <= 0.0 || !eigs.iter().all(|e| e.is_finite()) {
        return Err(Error::EigFailure);
    }
    let lambda: Vec<f64> = eigs.iter().map(|e| e.sqrt()).collect();
    let beta = hermitize(&matrix::inverse(&phi_zzbar)?);
    Ok(WeightData { n: pt.n, phi_zzbar, phi_zz, beta, lambda0: lambda[0], lambda, u })
}

impl WeightData {
    /// `Φ(z) = <z, Φ''_{zz̄} z̄> + Re <z, Φ''_{zz} z>`.
    pub fn phi(&self, z: &[Complex64]) -> f64 {
        let zbar: Vec<Complex64> = z.iter().map(|w| w.conj()).collect();
        matrix::bilinear(z, &self.phi_zzbar, &zbar).re + matrix::bilinear(z, &self.phi_zz, z).re
    }

    /// `diag(λ_1², ..., λ_n²)` rebuilt through `U`.
    pub fn reconstruct_phi_zzbar(&self) -> ComplexMatrix {
        let sq: Vec<f64> = self.lambda.iter().map(|l| l * l).collect();
        &self.u * diag(&sq) * self.u.adjoint()
    }

    /// Replaces the solver's eigenbasis by a caller-chosen unitary `U` with
    /// `U* Φ''_{zz̄} U = diag(λ²)` in the current eigenvalue order.
    pub fn with_eigenbasis(&self, u: ComplexMatrix, tol: f64) -> Result<WeightData> {
        if u.nrows() != self.n || u.ncols() != self.n {
            return Err(Error::DimensionMismatch("eigenbasis must be n x n".into()));
        }
        if !u.is_unitary(tol) {
            return Err(Error::EigenbasisMismatch { residual: u.unitary_residual() });
        }
        let sq: Vec<f64> = self.lambda.iter().map(|l| l * l).collect();
        let residual = (u.adjoint() * &self.phi_zzbar * &u - diag(&sq)).max_abs();
        if residual > tol * self.phi_zzbar.entry_scale() {
            return Err(Error::EigenbasisMismatch { residual });
        }
        Ok(WeightData { u, ..self.clone() })
    }
}

/// Generator `ψ̃_0 = exp(-<z,Qz>)` together with the matrices of its Rodrigues
/// formula.
#[derive(Clone, Debug)]
pub struct GeneratorData {
    pub rho: f64,
    /// Unitary intertwiner.
    pub x: ComplexMatrix,
    /// `μ_i = sqrt(λ_i² - ρ²) > 0`.
    pub mu: Vec<f64>,
    pub q: ComplexMatrix,
    pub s: ComplexMatrix,
    /// `S + Q` in closed form `-ρ² U diag(1/μ) X diag(λ) tU`.
    pub sq: ComplexMatrix,
    /// Coefficient matrix of the principal part `Ξ` of the creation operator,
    /// entries `Σ_j conj(γ_ij + q_ij) β_jk`.
    pub xi_coeff: ComplexMatrix,
    /// `max |Q - tQ|` of the closed form before symmetrization.
    pub q_symmetry_residual: f64,
    /// Same for `S`.
    pub s_symmetry_residual: f64,
}

impl GeneratorData {
    pub fn rho2(&self) -> f64 {
        self.rho * self.rho
    }
}

fn mu_values(wd: &WeightData, rho: f64) -> Result<Vec<f64>> {
    if !(rho > 0.0 && rho < wd.lambda0) {
        return Err(Error::RhoOutOfRange { rho, lambda0: wd.lambda0 });
    }
    Ok(wd.lambda.iter().map(|l| (l * l - rho * rho).sqrt()).collect())
}

/// True iff `X` is unitary and `tX D = D X` with `D = diag(μ_i/λ_i)`.
pub fn validate_intertwiner(x: &ComplexMatrix, wd: &WeightData, rho: f64, tol: f64) -> Result<bool> {
    let mu = mu_values(wd, rho)?;
    if x.nrows() != wd.n || x.ncols() != wd.n {
        return Err(Error::DimensionMismatch(format!("X is {}x{}, expected {}x{}", x.nrows(), x.ncols(), wd.n, wd.n)));
    }
    if !x.is_unitary(tol) {
        return Ok(false);
    }
    let ratios: Vec<f64> = mu.iter().zip(&wd.lambda).map(|(m, l)| m / l).collect();
    let d = diag(&ratios);
    Ok((x.transpose() * &d - &d * x).max_abs() <= tol)
}

pub fn build_generator(wd: &WeightData, rho: f64, x: &ComplexMatrix, tol: f64) -> Result<GeneratorData> {
    if !validate_intertwiner(x, wd, rho, tol)? {
        return Err(Error::IntertwinerInvalid);
    }
    let mu = mu_values(wd, rho)?;
    let lam = &wd.lambda;
    let u = &wd.u;
    let ut = u.transpose();
    let right = x * diag(lam) * &ut;

    let q_raw = -&wd.phi_zz + u * diag(&mu) * &right;
    let s_coeffs: Vec<f64> = lam.iter().zip(&mu).map(|(l, m)| l * l / m).collect();
    let s_raw = &wd.phi_zz - u * diag(&s_coeffs) * &right;
    let inv_mu: Vec<f64> = mu.iter().map(|m| 1.0 / m).collect();
    let sq_raw = (u * diag(&inv_mu) * &right).scale(-rho * rho);

    for (name, m) in [("Q", &q_raw), ("S", &s_raw), ("S+Q", &sq_raw)] {
        if !m.is_symmetric(tol) {
            return Err(Error::SymmetryViolation { name, residual: m.symmetry_residual() });
        }
    }
    let q = symmetrize(&q_raw);
    let s = symmetrize(&s_raw);
    let sq = symmetrize(&sq_raw);

    let xi_coeff = conj(&(&wd.phi_zz + &q)) * &wd.beta;
    let gen = GeneratorData {
        rho,
        x: x.clone(),
        mu,
        q,
        s,
        sq,
        xi_coeff,
        q_symmetry_residual: q_raw.symmetry_residual(),
        s_symmetry_residual: s_raw.symmetry_residual(),
    };

    let residual = generator_equation_residual(wd, &gen);
    let scale = wd.phi_zzbar.entry_scale();
    if residual > tol * scale {
        return Err(Error::ConstructionResidual { name: "generator_equation", value: residual, tol: tol * scale });
    }
    let sum_gap = (&gen.s + &gen.q - &gen.sq).max_abs();
    let sum_scale = gen.s.entry_scale().max(gen.q.entry_scale());
    if sum_gap > tol * sum_scale {
        return Err(Error::ConstructionResidual { name: "s_plus_q", value: sum_gap, tol: tol * sum_scale });
    }
    Ok(gen)
}

/// `2{Φ''_{zz̄} - (Φ''_{zz}+Q) conj(β) (Φ''_{zz}+Q)*}`, the matrix of
/// commutators `[Λ_i, Λ_j*]`.
pub fn ccr_matrix(wd: &WeightData, q: &ComplexMatrix) -> ComplexMatrix {
    let p = &wd.phi_zz + q;
    (&wd.phi_zzbar - &p * conj(&wd.beta) * p.adjoint()).scale(2.0)
}

/// `max |(Φ''_{zz}+Q) conj(β) (Φ''_{zz}+Q)* - (Φ''_{zz̄} - ρ² E)|`.
pub fn generator_equation_residual(wd: &WeightData, gen: &GeneratorData) -> f64 {
    let p = &wd.phi_zz + &gen.q;
    let lhs = &p * conj(&wd.beta) * p.adjoint();
    let rhs = &wd.phi_zzbar - ComplexMatrix::identity(wd.n, wd.n).scale(gen.rho2());
    (lhs - rhs).max_abs()
}

/// Forward check of the `Q` parametrization: `U* (Φ''_{zz}+Q) conj(β) (Φ''_{zz}+Q)* U`
/// against `diag(μ²)`.
pub fn spectral_residual(wd: &WeightData, gen: &GeneratorData) -> f64 {
    let p = &wd.phi_zz + &gen.q;
    let lhs = wd.u.adjoint() * &p * conj(&wd.beta) * p.adjoint() * &wd.u;
    let mu2: Vec<f64> = gen.mu.iter().map(|m| m * m).collect();
    (lhs - diag(&mu2)).max_abs()
}

/// Real symmetric `2n x 2n` matrix of `q(z) = <z,H z̄> + Re <z,N z>` in
/// coordinates `w = (Re z, Im z)`, for Hermitian `H` and symmetric `N`.
pub fn real_quadratic_form(h: &ComplexMatrix, nsym: &ComplexMatrix) -> DMatrix<f64> {
    let n = h.nrows();
    let j = matrix::real_embedding(n);
    let jbar = conj(&j);
    let total = j.transpose() * h * &jbar + j.transpose() * nsym * &j;
    let re = total.map(|z| z.re);
    (&re + re.transpose()) * 0.5
}

/// Smallest eigenvalue of the real form of `<z,Φ''_{zz̄} z̄> + Re <z,(Φ''_{zz}+Q) z>`.
pub fn condition1_margin(wd: &WeightData, q: &ComplexMatrix) -> Result<f64> {
    let form = real_quadratic_form(&wd.phi_zzbar, &(&wd.phi_zz + q));
    matrix::min_eigenvalue_real(&form)
}

/// Intertwiner `diag(e^{iθ_1}, ..., e^{iθ_n})`.
pub fn phase_intertwiner(thetas: &[f64]) -> ComplexMatrix {
    let n = thetas.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { Complex64::from_polar(1.0, thetas[i]) } else { real(0.0) })
}

/// Random triple valid by construction: complex symmetric `A`, `B` with
/// `|det B| >= 0.1`, and `C = C_R + i(W tW + 0.1 E)` with real symmetric `C_R`
/// and real `W`.
pub fn random_valid_triple<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let entry = |rng: &mut R| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let a_raw = ComplexMatrix::from_fn(n, n, |_, _| entry(rng));
    let a = symmetrize(&a_raw);
    let b = loop {
        let b = ComplexMatrix::from_fn(n, n, |_, _| entry(rng));
        if matrix::det(&b).norm() >= 0.1 {
            break b;
        }
    };
    let cr = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let cr = (&cr + cr.transpose()) * 0.5;
    let w = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let ci = &w * w.transpose() + DMatrix::<f64>::identity(n, n) * 0.1;
    let c = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(cr[(i, j)], ci[(i, j)]));
    (a, b, c)
}

/// Random phases `θ_i ∈ [0, 2π)`.
pub fn random_phases<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
}

/// Standard Bargmann triple `A = iE/2, B = -iE, C = iE`.
pub fn standard_triple(n: usize) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let e = ComplexMatrix::identity(n, n);
    (e.map(|z| z * I * 0.5), e.map(|z| -z * I), e.map(|z| z * I))
}

/// One-dimensional triple `A = i/s, B = i sqrt(1-s²), C = t + is`.
pub fn em_triple(s: f64, t: f64) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let one = |z: Complex64| ComplexMatrix::from_element(1, 1, z);
    (one(I / s), one(I * (1.0 - s * s).sqrt()), one(Complex64::new(t, s)))
}

/// The swap matrix `K`.
pub fn swap_matrix() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)])
}

/// Two-dimensional triple `A = i((1-s²)E + (1+s²)K)/4s, B = i sqrt(1-s²) E, C = 2is E`.
pub fn ghs_triple(s: f64) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let e = ComplexMatrix::identity(2, 2);
    let k = swap_matrix();
    let a = (e.scale(1.0 - s * s) + k.scale(1.0 + s * s)).map(|z| z * I / (4.0 * s));
    let b = e.map(|z| z * I * (1.0 - s * s).sqrt());
    let c = e.map(|z| z * I * 2.0 * s);
    (a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    const TOL: f64 = 1e-10;

    fn weight(abc: (ComplexMatrix, ComplexMatrix, ComplexMatrix)) -> (PhaseTriple, WeightData) {
        let pt = validate_phase_triple(&abc.0, &abc.1, &abc.2, TOL).unwrap();
        let wd = compute_weight_data(&pt, TOL).unwrap();
        (pt, wd)
    }

    #[test]
    fn standard_triple_is_valid() {
        let (a, b, c) = standard_triple(1);
        let pt = validate_phase_triple(&a, &b, &c, TOL).unwrap();
        assert_abs_diff_eq!(pt.c_imag[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.c_phi, 2f64.powf(-0.5) * PI.powf(-0.75), epsilon = 1e-15);
    }

    #[test]
    fn real_c_is_rejected() {
        let one = ComplexMatrix::from_element(1, 1, real(1.0));
        let zero = ComplexMatrix::from_element(1, 1, real(0.0));
        assert!(matches!(validate_phase_triple(&zero, &one, &one, TOL), Err(Error::NonPositiveCI { .. })));
    }

    #[test]
    fn each_condition_is_named() {
        let (a, b, c) = standard_triple(2);
        let mut bad_a = a.clone();
        bad_a[(0, 1)] = real(1.0);
        assert!(matches!(validate_phase_triple(&bad_a, &b, &c, TOL), Err(Error::NonSymmetricA { .. })));
        let mut bad_c = c.clone();
        bad_c[(1, 0)] = real(0.5);
        assert!(matches!(validate_phase_triple(&a, &b, &bad_c, TOL), Err(Error::NonSymmetricC { .. })));
        let sing = ComplexMatrix::from_element(2, 2, real(1.0));
        assert!(matches!(validate_phase_triple(&a, &sing, &c, TOL), Err(Error::SingularB { .. })));
        let small = ComplexMatrix::from_element(1, 1, real(1.0));
        assert!(matches!(validate_phase_triple(&a, &small, &c, TOL), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn em_triple_at_half() {
        let (pt, wd) = weight(em_triple(0.5, 0.0));
        assert_abs_diff_eq!(pt.c_imag[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(wd.phi_zzbar[(0, 0)].re, 3.0 / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(wd.phi_zz[(0, 0)].re, -5.0 / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(wd.phi_zz[(0, 0)].im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn standard_weight_data() {
        let (_, wd) = weight(standard_triple(1));
        assert_abs_diff_eq!(wd.phi_zzbar[(0, 0)].re, 0.25, epsilon = 1e-15);
        assert!(wd.phi_zz.max_abs() < 1e-15);
        assert_abs_diff_eq!(wd.lambda[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ghs_weight_data() {
        let (_, wd) = weight(ghs_triple(0.5));
        let e = ComplexMatrix::identity(2, 2);
        assert!((&wd.phi_zzbar - e.scale(3.0 / 16.0)).max_abs() < 1e-14);
        assert!((&wd.phi_zz + swap_matrix().scale(5.0 / 16.0)).max_abs() < 1e-14);
        for l in &wd.lambda {
            assert_abs_diff_eq!(*l, (3.0f64 / 16.0).sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn intertwiner_checks() {
        let (_, wd) = weight(random_valid_triple(3, &mut rand_chacha::ChaCha8Rng::seed_from_u64(3)));
        let rho = 0.5 * wd.lambda0;
        assert!(validate_intertwiner(&phase_intertwiner(&[0.3, 1.0, -2.0]), &wd, rho, TOL).unwrap());
        let (_, wd2) = weight(ghs_triple(0.5));
        assert!(validate_intertwiner(&swap_matrix(), &wd2, 0.2, TOL).unwrap());
        let nonunitary = diag(&[2.0, 1.0]);
        assert!(!validate_intertwiner(&nonunitary, &wd2, 0.2, TOL).unwrap());
        assert!(matches!(
            validate_intertwiner(&swap_matrix(), &wd2, wd2.lambda0, TOL),
            Err(Error::RhoOutOfRange { .. })
        ));
        assert!(matches!(validate_intertwiner(&swap_matrix(), &wd2, 0.0, TOL), Err(Error::RhoOutOfRange { .. })));
    }

    #[test]
    fn em_generator_at_half() {
        let (_, wd) = weight(em_triple(0.5, 0.0));
        let wd = wd.with_eigenbasis(ComplexMatrix::from_element(1, 1, I), TOL).unwrap();
        let g = build_generator(&wd, (1.0f64 / 3.0).sqrt(), &phase_intertwiner(&[0.0]), TOL).unwrap();
        assert_abs_diff_eq!(g.q[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(g.s[(0, 0)].re, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(g.mu[0] * g.mu[0], 1.0 / 24.0, epsilon = 1e-15);
    }

    #[test]
    fn ghs_generator_at_half() {
        let (_, wd) = weight(ghs_triple(0.5));
        let wd = wd.with_eigenbasis(ComplexMatrix::identity(2, 2).map(|z| z * I), TOL).unwrap();
        let g = build_generator(&wd, (1.0f64 / 6.0).sqrt(), &swap_matrix(), TOL).unwrap();
        let k4 = swap_matrix().scale(0.25);
        assert!((&g.q - &k4).max_abs() < 1e-13);
        assert!((&g.s - &k4).max_abs() < 1e-13);
        for m in &g.mu {
            assert_abs_diff_eq!(m * m, 1.0 / 48.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn standard_generator_by_hand() {
        // Q = -Φ''_zz + U μ X λ tU with Φ''_zz = 0, U = X = 1, λ = 1/2, μ = 1/4.
        let (_, wd) = weight(standard_triple(1));
        let wd = wd.with_eigenbasis(ComplexMatrix::from_element(1, 1, real(1.0)), TOL).unwrap();
        let g = build_generator(&wd, (3.0f64 / 16.0).sqrt(), &phase_intertwiner(&[0.0]), TOL).unwrap();
        assert_abs_diff_eq!(g.mu[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(g.q[(0, 0)].re, 0.125, epsilon = 1e-15);
    }

    #[test]
    fn ccr_examples() {
        let (_, wd) = weight(em_triple(0.5, 0.0));
        let half = ComplexMatrix::from_element(1, 1, real(0.5));
        assert_abs_diff_eq!(ccr_matrix(&wd, &half)[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-14);
        let (_, wd) = weight(standard_triple(1));
        let zero = ComplexMatrix::zeros(1, 1);
        assert_abs_diff_eq!(ccr_matrix(&wd, &zero)[(0, 0)].re, 0.5, epsilon = 1e-15);
        // (Φ''_zz + Q) = -K/16, conj(β) = 16/3 E: 2{3/16 E - (1/256)(16/3) K²} = 1/3 E.
        let (_, wd) = weight(ghs_triple(0.5));
        let c = ccr_matrix(&wd, &swap_matrix().scale(0.25));
        assert!((c - ComplexMatrix::identity(2, 2).scale(1.0 / 3.0)).max_abs() < 1e-14);
    }

    #[test]
    fn condition1_examples() {
        // (1/4)x² + (1/2)y² for α = 3/8, γ + q = -1/8.
        let (_, wd) = weight(em_triple(0.5, 0.0));
        let half = ComplexMatrix::from_element(1, 1, real(0.5));
        assert_abs_diff_eq!(condition1_margin(&wd, &half).unwrap(), 0.25, epsilon = 1e-14);
        let (_, wd) = weight(standard_triple(1));
        assert_abs_diff_eq!(condition1_margin(&wd, &ComplexMatrix::zeros(1, 1)).unwrap(), 0.25, epsilon = 1e-15);
        // γ + q = 1 dominates α = 1/4: q(iy) = (1/4 - 1) y².
        let one = ComplexMatrix::from_element(1, 1, real(1.0));
        assert_abs_diff_eq!(condition1_margin(&wd, &one).unwrap(), -0.75, epsilon = 1e-14);
    }

    #[test]
    fn inconsistent_eigenbasis_is_rejected() {
        let (_, wd) = weight(random_valid_triple(2, &mut rand_chacha::ChaCha8Rng::seed_from_u64(9)));
        let bad = ComplexMatrix::identity(2, 2);
        assert!(matches!(wd.with_eigenbasis(bad, TOL), Err(Error::EigenbasisMismatch { .. })));
    }

    #[test]
    fn non_intertwining_unitary_is_rejected() {
        let (_, wd) = weight(random_valid_triple(2, &mut rand_chacha::ChaCha8Rng::seed_from_u64(1)));
        assert!(wd.lambda[0] < wd.lambda[1] - 1e-6);
        assert!(matches!(
            build_generator(&wd, 0.5 * wd.lambda0, &swap_matrix(), TOL),
            Err(Error::IntertwinerInvalid)
        ));
    }
}
