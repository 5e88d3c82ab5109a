//! Tensor-product Gauss–Hermite quadrature for integrands of the form
//! `f(w) exp(-wᵀ M w + ℓᵀ w + c)` on `ℝ^d` with complex `M, ℓ, c`.
//!
//! [`integrate_entire`] moves the contour through the complex stationary
//! point, which is exact for entire `f` and removes the fast oscillation a
//! complex linear term would otherwise put on the real grid.
//! [`integrate_gaussian`] stays on the real contour for general `f`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::matrix::inverse;
use crate::{ComplexMatrix, Error, Exec, Result};

/// Nodes and weights for `∫ e^{-t²} g(t) dt`.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Roots of the orthonormal Hermite polynomials by Newton iteration,
    /// with the classical asymptotic starting guesses.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("Gauss-Hermite rule needs at least one node".into()));
        }
        const PIM4: f64 = 0.751_125_544_464_942_5;
        let nf = n as f64;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let mut z = 0.0f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            let mut converged = false;
            for _ in 0..100 {
                let (mut p1, mut p2) = (PIM4, 0.0);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::QuadratureUnderflow(format!("Gauss-Hermite root {i} of {n} did not converge")));
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[n / 2] = 0.0;
        }
        Ok(GaussHermite { nodes: x, weights: w })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_node(&self) -> f64 {
        self.nodes.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }
}

/// The Gaussian factor `exp(-wᵀ M w + ℓᵀ w + c)`.
#[derive(Clone, Debug)]
pub struct ComplexGaussian {
    pub m: ComplexMatrix,
    pub l: Vec<Complex64>,
    pub c: Complex64,
}

impl ComplexGaussian {
    pub fn dim(&self) -> usize {
        self.l.len()
    }

    pub fn exponent(&self, w: &[Complex64]) -> Complex64 {
        let d = self.dim();
        let mut acc = self.c;
        for i in 0..d {
            acc += self.l[i] * w[i];
            for j in 0..d {
                acc -= self.m[(i, j)] * w[i] * w[j];
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// `|I_N - I_{N/2}|`, or 0 when the rule is too small to halve.
    pub error_estimate: f64,
    pub nodes: usize,
}

/// Affine map `w = center + L^{-T} t` that turns the envelope into `e^{-|t|²}`.
struct Frame {
    center: Vec<Complex64>,
    l_inv_t: DMatrix<f64>,
    jacobian: f64,
}

fn frame(g: &ComplexGaussian, rule_width: f64, shift: bool) -> Result<Frame> {
    let d = g.dim();
    if g.m.shape() != (d, d) {
        return Err(Error::DimensionMismatch("Gaussian matrix and linear term disagree".into()));
    }
    let mr = g.m.map(|z| z.re);
    let mr = (&mr + mr.transpose()) * 0.5;
    let chol = mr
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NonIntegrableWeight("real part of the Gaussian decay matrix is not positive definite".into()))?;
    let l = chol.l();
    let jacobian = 1.0 / l.diagonal().iter().product::<f64>();
    let l_inv_t = l.transpose().try_inverse().expect("Cholesky factor is invertible");
    let lr = DVector::from_iterator(d, g.l.iter().map(|z| z.re));
    let real_center = chol.solve(&lr) * 0.5;

    let msym = (&g.m + g.m.transpose()).scale(0.5);
    let stationary = inverse(&msym).ok().map(|minv| (minv * DVector::from_column_slice(&g.l)).scale(0.5));
    let center = match (shift, stationary) {
        (true, Some(ws)) => ws.iter().copied().collect(),
        (true, None) => return Err(Error::NonIntegrableWeight("Gaussian decay matrix is singular".into())),
        (false, ws) => {
            // the complex stationary point must sit inside the node window
            if let Some(ws) = ws {
                let off = ws - real_center.map(|v| Complex64::new(v, 0.0));
                let t = l.transpose().map(|v| Complex64::new(v, 0.0)) * off;
                let reach = t.iter().fold(0.0f64, |a, z| a.max(z.norm()));
                if reach > 0.5 * rule_width {
                    return Err(Error::QuadratureUnderflow(format!(
                        "shifted Gaussian center lies {reach:.2} scaled units out, node window half-width is {:.2}",
                        0.5 * rule_width
                    )));
                }
            }
            real_center.iter().map(|&v| Complex64::new(v, 0.0)).collect()
        }
    };
    Ok(Frame { center, l_inv_t, jacobian })
}

fn integrate_rule<F>(g: &ComplexGaussian, f: &F, rule: &GaussHermite, fr: &Frame, exec: Exec) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let d = g.dim();
    let n = rule.len();
    let inner_count = n.pow(d as u32 - 1);
    let partials = exec.map_range(n, |first| {
        let mut idx = vec![0usize; d];
        idx[0] = first;
        let mut t = vec![0.0; d];
        let mut w = vec![Complex64::new(0.0, 0.0); d];
        let mut acc = Complex64::new(0.0, 0.0);
        for flat in 0..inner_count {
            let mut rem = flat;
            for slot in idx.iter_mut().skip(1) {
                *slot = rem % n;
                rem /= n;
            }
            let mut weight = 1.0;
            let mut tsq = 0.0;
            for k in 0..d {
                t[k] = rule.nodes[idx[k]];
                weight *= rule.weights[idx[k]];
                tsq += t[k] * t[k];
            }
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = fr.center[i] + (0..d).map(|k| fr.l_inv_t[(i, k)] * t[k]).sum::<f64>();
            }
            acc += f(&w) * (g.exponent(&w) + tsq).exp() * weight;
        }
        acc
    });
    partials.into_iter().sum::<Complex64>() * fr.jacobian
}

fn integrate<F>(g: &ComplexGaussian, f: F, nodes: usize, exec: Exec, shift: bool, estimate: bool) -> Result<QuadResult>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    if g.dim() == 0 {
        return Err(Error::DimensionMismatch("zero-dimensional integral".into()));
    }
    let rule = GaussHermite::new(nodes)?;
    let fr = frame(g, rule.max_node(), shift)?;
    let value = integrate_rule(g, &f, &rule, &fr, exec);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::QuadratureUnderflow("integrand overflowed on the node grid".into()));
    }
    let error_estimate = if estimate && nodes >= 4 {
        let coarse = integrate_rule(g, &f, &GaussHermite::new(nodes / 2)?, &fr, exec);
        (value - coarse).norm()
    } else {
        0.0
    };
    Ok(QuadResult { value, error_estimate, nodes })
}

/// `∫_{ℝ^d} f(w) exp(-wᵀMw + ℓᵀw + c) dw` on an `nodes^d` tensor grid along
/// the real contour. `f` receives real points (zero imaginary parts).
pub fn integrate_gaussian<F>(g: &ComplexGaussian, f: F, nodes: usize, exec: Exec) -> Result<QuadResult>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    integrate(g, f, nodes, exec, false, true)
}

/// Same integral for entire `f`, evaluated on the real contour translated
/// to the complex stationary point `½ M⁻¹ ℓ`.
pub fn integrate_entire<F>(g: &ComplexGaussian, f: F, nodes: usize, exec: Exec) -> Result<QuadResult>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    integrate(g, f, nodes, exec, true, true)
}

/// [`integrate_entire`] without the half-resolution error estimate.
pub fn integrate_entire_value<F>(g: &ComplexGaussian, f: F, nodes: usize, exec: Exec) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    integrate(g, f, nodes, exec, true, false).map(|r| r.value)
}
