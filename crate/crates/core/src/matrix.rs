//! Dense complex matrices and the handful of predicates and factorizations
//! the construction needs.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

/// Dense complex matrix, stored by nalgebra (column-major internally; the
/// serialized form in [`crate::serde_repr`] is row-major).
pub type ComplexMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub trait MatrixExt {
    /// Largest entry modulus.
    fn max_abs(&self) -> f64;
    /// `max |M - tM|`.
    fn symmetry_residual(&self) -> f64;
    /// `max |M - M*|`.
    fn hermitian_residual(&self) -> f64;
    /// `max |M* M - E|`.
    fn unitary_residual(&self) -> f64;

    /// Entry scale used to turn absolute residuals into relative ones.
    fn entry_scale(&self) -> f64 {
        self.max_abs().max(1.0)
    }
    fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_residual() <= tol * self.entry_scale()
    }
    fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol * self.entry_scale()
    }
    fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_residual() <= tol
    }
}

impl MatrixExt for ComplexMatrix {
    fn max_abs(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn symmetry_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - self.transpose()).max_abs()
    }

    fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - self.adjoint()).max_abs()
    }

    fn unitary_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.nrows();
        (self.adjoint() * self - ComplexMatrix::identity(n, n)).max_abs()
    }
}

/// Complex diagonal matrix from real entries.
pub fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { real(values[i]) } else { real(0.0) })
}

/// Entrywise complex conjugate (no transpose).
pub fn conj(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| z.conj())
}

/// `(M + tM) / 2`.
pub fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.transpose()).scale(0.5)
}

/// `(M + M*) / 2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &ComplexMatrix) -> Complex64 {
    m.clone().lu().determinant()
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::DimensionMismatch("matrix is singular".into()))
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// ascending; the columns of the returned unitary follow the same order.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(hermitize(m), f64::EPSILON, 10_000).ok_or(Error::EigFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_eigenvalue_real(m: &DMatrix<f64>) -> Result<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000).ok_or(Error::EigFailure)?;
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// The `n x 2n` matrix `J = [E, iE]` mapping real coordinates
/// `w = (x_1..x_n, y_1..y_n)` to `z = x + iy`.
pub fn real_embedding(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, 2 * n, |i, j| {
        if j == i {
            real(1.0)
        } else if j == i + n {
            I
        } else {
            real(0.0)
        }
    })
}

/// Bilinear form `tz M z`.
pub fn bilinear(z: &[Complex64], m: &ComplexMatrix, zeta: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..z.len() {
        for j in 0..zeta.len() {
            acc += z[i] * m[(i, j)] * zeta[j];
        }
    }
    acc
}
