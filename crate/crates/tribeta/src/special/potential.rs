//! Logarithmic potential of the semicircle law and the associated complex
//! phase function, double precision.

use crate::special::quadrature::integrate_complex;
use crate::Cplx;
use std::f64::consts::{FRAC_PI_2, PI};

/// g(z) = integral of the semicircle density times log(z - x).
///
/// Computed by adaptive quadrature after the substitution x = sin t. Valid
/// away from the support [-1, 1]; on the real axis use |z| > 1.
pub fn equilibrium_potential(z: Cplx) -> Cplx {
    let f = |t: f64| {
        let c = t.cos();
        (z - t.sin()).ln() * (c * c)
    };
    integrate_complex(f, -FRAC_PI_2, FRAC_PI_2, 1e-12) * (2.0 / PI)
}

/// Phase function `phi(z) = -i z sqrt(1-z) sqrt(1+z) - 2 i asin(z) + i pi`.
///
/// Re phi > 0 on the open upper half plane, vanishing linearly as z
/// approaches the support; Re phi(E + i eta) / eta tends to
/// (3 - 2 E^2) / sqrt(1 - E^2) for |E| < 1.
pub fn phase_phi(z: Cplx) -> Cplx {
    let i = Cplx::new(0.0, 1.0);
    let one = Cplx::new(1.0, 0.0);
    let root = (one - z).sqrt() * (one + z).sqrt();
    -i * z * root - 2.0 * i * z.asin() + i * PI
}
