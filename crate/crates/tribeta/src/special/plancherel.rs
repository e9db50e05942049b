//! Large-degree asymptotic forms for the Hermite functions: the oscillatory
//! bulk approximation, the Airy-type transition form near the turning point,
//! and the induced predictions for zero locations on the semicircle scale.

use crate::error::{Error, Result};
use crate::special::airy::{airy, airy_prime};
use crate::special::semicircle::semicircle_quantile;
use std::f64::consts::{FRAC_PI_4, PI};

/// Bulk approximation to E_k(x) for |x| < sqrt(k): an oscillation under the
/// envelope sqrt(2/pi) k^{-1/4} (1-u^2)^{-1/4}, u = x/sqrt(k).
pub fn pr_oscillatory(k: usize, x: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("k", "degree must be >= 1"));
    }
    let kf = k as f64;
    let u = x / kf.sqrt();
    if u * u >= 1.0 {
        return Err(Error::param(
            "x",
            format!("|x| must be below sqrt(k); u = {u}"),
        ));
    }
    let envelope = (2.0 / PI).sqrt() * kf.powf(-0.25) * (1.0 - u * u).powf(-0.25);
    let phase_frac = (u * (1.0 - u * u).sqrt() + u.asin()) / PI - 0.5;
    Ok(envelope * (kf * PI * phase_frac + 0.5 * u.asin()).cos())
}

/// Airy-type approximation to E_k(x) near the turning point x = sqrt(k),
/// smooth across it; valid for x > 0.
pub fn pr_transition(k: usize, x: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("k", "degree must be >= 1"));
    }
    if !(x > 0.0) {
        return Err(Error::param("x", format!("needs x > 0, got {x}")));
    }
    let kf = k as f64;
    let u = x / kf.sqrt();
    let d = (1.0 - u).abs();
    let w = if d < 1e-4 {
        // series around the turning point, stable where the closed forms
        // cancel catastrophically
        let base = 2.0 * 2.0f64.sqrt() * kf * d.powf(1.5);
        let corr = 3.0 * d / 20.0;
        if u <= 1.0 {
            base * (1.0 - corr)
        } else {
            base * (1.0 + corr)
        }
    } else if u <= 1.0 {
        3.0 * kf * (FRAC_PI_4 - (u * (1.0 - u * u).sqrt() + u.asin()) / 2.0)
    } else {
        1.5 * kf * (u * (u * u - 1.0).sqrt() - u.acosh())
    };
    let f = if u <= 1.0 {
        -w.powf(2.0 / 3.0)
    } else {
        w.powf(2.0 / 3.0)
    };
    let sigma = if d < 1e-12 {
        2.0 * kf.powf(2.0 / 3.0)
    } else {
        f.abs() / d
    };
    let a = ((1.0 + u) * sigma).powf(0.25);
    Ok(kf.powf(-0.25) * (a * airy(f) - airy_prime(f) / a))
}

/// Predicted location of the k-th largest zero of H_n on the semicircle
/// scale (zeros divided by sqrt(2n)); k = 1 is the largest.
pub fn hermite_zero_prediction(k: usize, n: usize) -> Result<f64> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::param("k", format!("need 1 <= k <= n, got k={k} n={n}")));
    }
    let nf = n as f64;
    let base = (6 * k - 3) as f64 / (6.0 * nf);
    let coarse = semicircle_quantile(k as f64 / nf)?;
    semicircle_quantile(base + coarse.asin() / (2.0 * PI * nf))
}

/// Classical location of the j-th largest eigenvalue: the semicircle
/// quantile at level (2j - 1) / (2n).
pub fn semiclassical_location(j: usize, n: usize) -> Result<f64> {
    if n == 0 || j == 0 || j > n {
        return Err(Error::param("j", format!("need 1 <= j <= n, got j={j} n={n}")));
    }
    semicircle_quantile((2 * j - 1) as f64 / (2.0 * n as f64))
}
