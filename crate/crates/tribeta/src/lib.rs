//! Tridiagonal models for Gaussian beta-ensembles and the numerical checks
//! built on them: Sturm-sequence eigensolving, Stieltjes transforms by several
//! routes, Hermite/Airy asymptotics, resolvent-entry audits, and Monte-Carlo
//! campaigns for the local semicircle law.
//!
//! The numeric kernel (matrices, eigensolver, scaled arithmetic, Hermite and
//! semicircle functions) is generic over the scalar type; the analysis layers
//! work with [`Real`] = `f64`.
//!
//! Scale conventions used throughout: a sampled matrix `A` has raw eigenvalues
//! on the scale of `sqrt(n)`; the spectrum scaled as `lambda_bar = raw /
//! sqrt(2n)` obeys the semicircle law on `[-1, 1]`, and every Stieltjes or
//! resolvent quantity refers to the normalized matrix `A / sqrt(2n)`.

pub mod eigen;
pub mod error;
pub mod experiments;
pub mod float;
pub mod linalg;
pub mod models;
pub mod resolvent;
pub mod rng;
pub mod scaled;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use float::Scalar;

/// Concrete scalar used by the analysis layers.
pub type Real = f64;
/// Complex number over [`Real`].
pub type Cplx = num_complex::Complex<Real>;
