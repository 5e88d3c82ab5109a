use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("A is not symmetric (residual {residual:.3e}); requires tA = A")]
    NonSymmetricA { residual: f64 },
    #[error("C is not symmetric (residual {residual:.3e}); requires tC = C")]
    NonSymmetricC { residual: f64 },
    #[error("B is singular (|det B| = {det_abs:.3e}); requires det B != 0")]
    SingularB { det_abs: f64 },
    #[error("C_I is not positive definite (smallest eigenvalue {min_eig:.3e}); requires C_I > 0")]
    NonPositiveCI { min_eig: f64 },
    #[error("Hermitian eigensolver did not converge")]
    EigFailure,
    #[error("supplied eigenbasis does not diagonalize Phi''_zzbar (residual {residual:.3e})")]
    EigenbasisMismatch { residual: f64 },
    #[error("rho = {rho} outside the open interval (0, lambda0 = {lambda0}); requires 0 < rho < lambda0")]
    RhoOutOfRange { rho: f64, lambda0: f64 },
    #[error("X is not a unitary intertwiner for the given weight data and rho")]
    IntertwinerInvalid,
    #[error("{name} violates tM = M (residual {residual:.3e})")]
    SymmetryViolation { name: &'static str, residual: f64 },
    #[error("construction residual {name} = {value:.3e} exceeds tolerance {tol:.1e}")]
    ConstructionResidual { name: &'static str, value: f64, tol: f64 },
    #[error("Gaussian exponent of operand does not match Q (residual {residual:.3e})")]
    MExponentMismatch { residual: f64 },
    #[error("moment degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("combined weight is not integrable: {0}")]
    NonIntegrableWeight(String),
    #[error("family lacks total degree {needed} (has up to {available})")]
    IncompleteFamily { needed: usize, available: usize },
    #[error("quadrature window underflow: {0}")]
    QuadratureUnderflow(String),
    #[error("fit of sampled transform failed (relative residual {residual:.3e})")]
    FitFailure { residual: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
