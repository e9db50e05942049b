//! Special functions: Hermite polynomials and functions, the Airy function,
//! semicircle quantities, the equilibrium log-potential, and asymptotic
//! approximations with their zero-location predictions.

mod airy;
mod hermite;
mod plancherel;
mod potential;
pub mod quadrature;
mod semicircle;

pub use airy::{airy, airy_prime};
pub use hermite::{
    hermite_function, hermite_function_scaled, hermite_poly, hermite_poly_complex,
    hermite_ratio_complex,
};
pub use plancherel::{
    hermite_zero_prediction, pr_oscillatory, pr_transition, semiclassical_location,
};
pub use potential::{equilibrium_potential, phase_phi};
pub use semicircle::{
    semicircle_cdf, semicircle_density, semicircle_quantile, semicircle_stieltjes,
};
