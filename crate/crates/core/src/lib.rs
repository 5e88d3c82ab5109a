//! Generalized Segal-Bargmann spaces and their holomorphic Hermite families.
//!
//! A Bargmann-type transform is fixed by a matrix triple `(A, B, C)`. From it
//! this crate derives the weight `Φ(z)` of the target Segal-Bargmann space,
//! constructs Gaussian generators `exp(-<z, Qz>)` whose annihilation and
//! creation operators satisfy canonical commutation relations, and builds the
//! associated Hermite family together with exact (Wick-moment) inner products
//! and quadrature-based evaluation of the transform itself.
//!
//! Module map:
//!
//! * [`model`]: phase triples, weight data and generator construction.
//! * [`poly`], [`gauss_poly`]: sparse polynomials times Gaussians, first-order
//!   differential operators, the Hermite family and its Rodrigues formula.
//! * [`integrals`]: weighted inner products via Gaussian moments.
//! * [`quadrature`], [`transform`]: Gauss-Hermite quadrature, the transform,
//!   its inverse and the reproducing kernel.
//! * [`exec`]: sequential or rayon-backed execution of the data-parallel loops.

pub mod error;
pub mod exec;
pub mod gauss_poly;
pub mod integrals;
pub mod matrix;
pub mod model;
pub mod multi_index;
pub mod poly;
pub mod quadrature;
pub mod serde_repr;
pub mod transform;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gauss_poly::{GaussPoly, HermiteFamily, LinearDiffOp};
pub use matrix::{ComplexMatrix, MatrixExt};
pub use model::{GeneratorData, PhaseTriple, WeightData};
pub use multi_index::MultiIndex;
pub use num_complex::Complex64;
pub use poly::PolyC;

/// Default tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Default tolerance for chained constructions.
pub const CHAINED_TOL: f64 = 1e-8;
