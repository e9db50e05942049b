//! The semicircle distribution on [-1, 1]: density, CDF, quantile, and
//! Stieltjes transform in closed form.

use crate::error::{Error, Result};
use crate::float::Scalar;
use num_complex::Complex;

/// Density (2/pi) sqrt(1 - x^2) on [-1, 1], zero outside.
pub fn semicircle_density<S: Scalar>(x: S) -> S {
    let one = S::one();
    if x <= -one || x >= one {
        return S::zero();
    }
    S::c(2.0) / S::PI() * (one - x * x).sqrt()
}

/// Distribution function of the semicircle law.
pub fn semicircle_cdf<S: Scalar>(x: S) -> S {
    let one = S::one();
    if x <= -one {
        return S::zero();
    }
    if x >= one {
        return one;
    }
    S::c(0.5) + (x * (one - x * x).sqrt() + x.asin()) / S::PI()
}

/// Decreasing quantile: the location holding mass `t` to its right,
/// i.e. the solution of `cdf(x) = 1 - t`. Domain [0, 1].
pub fn semicircle_quantile<S: Scalar>(t: S) -> Result<S> {
    if !(t >= S::zero() && t <= S::one()) {
        return Err(Error::param("t", format!("quantile level in [0,1], got {t}")));
    }
    let target = S::one() - t;
    let mut lo = -S::one();
    let mut hi = S::one();
    for _ in 0..90 {
        let mid = (lo + hi) * S::c(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if semicircle_cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * S::c(0.5))
}

/// Stieltjes transform of the semicircle law,
/// `s(z) = 2(-z + sqrt(z-1) sqrt(z+1))` with principal square roots.
/// Herglotz: maps the upper half plane into itself.
pub fn semicircle_stieltjes<S: Scalar>(z: Complex<S>) -> Complex<S> {
    let one = Complex::new(S::one(), S::zero());
    ((z - one).sqrt() * (z + one).sqrt() - z) * S::c(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quadrature::integrate;
    use crate::Cplx;
    use proptest::prelude::*;

    #[test]
    fn density_values() {
        assert!((semicircle_density(0.0f64) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(semicircle_density(1.0f64), 0.0);
        assert_eq!(semicircle_density(-1.2f64), 0.0);
        let total = integrate(semicircle_density::<f64>, -1.0, 1.0, 1e-12);
        assert!((total - 1.0).abs() < 1e-10, "mass {total}");
    }

    #[test]
    fn cdf_values() {
        assert_eq!(semicircle_cdf(-1.5f64), 0.0);
        assert_eq!(semicircle_cdf(2.0f64), 1.0);
        assert!((semicircle_cdf(0.0f64) - 0.5).abs() < 1e-15);
        assert!((semicircle_cdf(0.3f64) - 0.68808116760946353).abs() < 1e-14);
    }

    #[test]
    fn quantile_frozen_points() {
        assert!((semicircle_quantile(0.25f64).unwrap() - 0.40397275329951721).abs() < 1e-12);
        assert!((semicircle_quantile(0.6f64).unwrap() + 0.1577361938000158).abs() < 1e-12);
        assert!((semicircle_quantile(0.1f64).unwrap() - 0.68704882613254056).abs() < 1e-12);
        assert!(semicircle_quantile(0.5f64).unwrap().abs() < 1e-13);
        assert!(semicircle_quantile(-0.1f64).is_err());
        assert!(semicircle_quantile(1.7f64).is_err());
    }

    #[test]
    fn stieltjes_frozen_points() {
        let s = semicircle_stieltjes(Cplx::new(0.0, 1.0));
        assert!((s - Cplx::new(0.0, 0.8284271247461901)).norm() < 1e-14, "{s}");
        let s2 = semicircle_stieltjes(Cplx::new(0.2, 0.05));
        let want = Cplx::new(-0.37961521240187508, 1.8622475734640165);
        assert!((s2 - want).norm() < 1e-12, "{s2}");
    }

    #[test]
    fn stieltjes_boundary_density() {
        // Im s(x + i eps) approaches pi * density(x)
        let x = 0.3f64;
        let s = semicircle_stieltjes(Cplx::new(x, 1e-7));
        let want = std::f64::consts::PI * semicircle_density(x);
        assert!((s.im - want).abs() < 1e-5, "{} vs {want}", s.im);
    }

    #[test]
    fn real_axis_outside_support() {
        let s = semicircle_stieltjes(Cplx::new(2.0, 0.0));
        assert!((s.re - 2.0 * (-2.0 + 3.0f64.sqrt())).abs() < 1e-14);
        assert!(s.im.abs() < 1e-15);
        let sm = semicircle_stieltjes(Cplx::new(-2.0, 0.0));
        assert!((sm.re - 2.0 * (2.0 - 3.0f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn single_precision_instantiation() {
        assert!((semicircle_density(0.0f32) - 0.63661975f32).abs() < 1e-6);
        assert!((semicircle_cdf(0.5f32) - 0.80450517f32).abs() < 1e-5);
        let q = semicircle_quantile(0.25f32).unwrap();
        assert!((q - 0.40397275f32).abs() < 1e-5, "{q}");
        let s = semicircle_stieltjes(Complex::new(0.0f32, 1.0));
        assert!((s.im - 0.8284271f32).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn cdf_monotone(a in -1.2f64..1.2, b in -1.2f64..1.2) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(semicircle_cdf(lo) <= semicircle_cdf(hi));
        }

        #[test]
        fn quantile_round_trip(t in 0.01f64..0.99) {
            let x = semicircle_quantile(t).unwrap();
            prop_assert!((semicircle_cdf(x) - (1.0 - t)).abs() < 1e-10);
        }

        #[test]
        fn herglotz_and_quadratic_relation(e in -3.0f64..3.0, eta in 1e-4f64..3.0) {
            let z = Cplx::new(e, eta);
            let s = semicircle_stieltjes(z);
            prop_assert!(s.im > 0.0, "Im s = {} at {z}", s.im);
            // s solves s^2 + 4 z s + 4 = 0
            let resid = s * s + z * s * 4.0 + 4.0;
            prop_assert!(resid.norm() < 1e-10, "residual {resid} at {z}");
        }
    }
}
