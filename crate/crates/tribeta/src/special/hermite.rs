//! Physicists' Hermite polynomials H_n and the orthonormal Hermite functions
//! E_k, all through renormalized three-term recurrences so that degrees in the
//! thousands and far-tail arguments stay representable.
//!
//! `E_k(x) = 2^{1/4} psi_k(sqrt(2) x)` where psi_k are the L2-normalized
//! Hermite wave functions; with this scaling the zero-temperature tridiagonal
//! eigenvectors are exactly `E_{n-1-c}` evaluated at raw eigenvalues / sqrt(2).

use crate::float::Scalar;
use crate::scaled::{LogPolar, Renorm, ScaledReal};
use num_complex::Complex;

fn scaled_from<S: Scalar>(mant: S, acc: S) -> ScaledReal<S> {
    if mant == S::zero() {
        ScaledReal::zero()
    } else {
        let sign = if mant > S::zero() { 1 } else { -1 };
        ScaledReal::from_sign_ln(sign, acc + mant.abs().ln())
    }
}

/// H_n(x) in sign/log form: H_1600 overflows f64 by thousands of digits.
pub fn hermite_poly<S: Scalar>(n: usize, x: S) -> ScaledReal<S> {
    if n == 0 {
        return ScaledReal::one();
    }
    let two = S::c(2.0);
    let mut prev = S::one();
    let mut cur = two * x;
    let mut rn = Renorm::new();
    for k in 1..n {
        let next = two * (x * cur - S::of(k) * prev);
        prev = cur;
        cur = next;
        rn.step(&mut prev, &mut cur);
    }
    scaled_from(cur, rn.acc)
}

/// H_n at a complex argument, in log-polar form.
pub fn hermite_poly_complex<S: Scalar>(n: usize, z: Complex<S>) -> LogPolar<S> {
    if n == 0 {
        return LogPolar::from_parts(S::zero(), S::zero());
    }
    let two = S::c(2.0);
    let hi = S::max_value().sqrt() * S::c(1e-3);
    let lo = hi.recip();
    let mut acc = S::zero();
    let mut prev = Complex::new(S::one(), S::zero());
    let mut cur = z * two;
    for k in 1..n {
        let next = (z * cur - prev * S::of(k)) * two;
        prev = cur;
        cur = next;
        let m = cur.norm();
        if (m > hi || (m < lo && m > S::zero())) && m.is_finite() {
            prev = prev / m;
            cur = cur / m;
            acc += m.ln();
        }
    }
    let m = cur.norm();
    LogPolar::from_parts(acc + m.ln(), cur.arg())
}

/// Ratio H_{n-1}(z) / H_n(z); the renormalization factors cancel.
pub fn hermite_ratio_complex<S: Scalar>(n: usize, z: Complex<S>) -> Complex<S> {
    assert!(n >= 1, "ratio needs n >= 1");
    let two = S::c(2.0);
    let hi = S::max_value().sqrt() * S::c(1e-3);
    let lo = hi.recip();
    let mut prev = Complex::new(S::one(), S::zero());
    let mut cur = z * two;
    for k in 1..n {
        let next = (z * cur - prev * S::of(k)) * two;
        prev = cur;
        cur = next;
        let m = cur.norm();
        if (m > hi || (m < lo && m > S::zero())) && m.is_finite() {
            prev = prev / m;
            cur = cur / m;
        }
    }
    prev / cur
}

fn psi_recurrence<S: Scalar>(k: usize, y: S) -> (S, S) {
    // returns (mantissa, log-scale) with psi_k(y) = mantissa * exp(log-scale)
    let mut acc = -y * y * S::c(0.5);
    let seed = S::c(0.7511255444649425); // pi^{-1/4}
    if k == 0 {
        return (seed, acc);
    }
    let mut prev = seed;
    let mut cur = S::SQRT_2() * y * seed;
    let mut rn = Renorm::new();
    for j in 1..k {
        let a = (S::c(2.0) / S::of(j + 1)).sqrt();
        let b = (S::of(j) / S::of(j + 1)).sqrt();
        let next = y * a * cur - b * prev;
        prev = cur;
        cur = next;
        rn.step(&mut prev, &mut cur);
    }
    acc += rn.acc;
    (cur, acc)
}

/// Orthonormal Hermite function E_k(x); underflows gracefully to 0 deep in
/// the tail (use [`hermite_function_scaled`] there instead).
pub fn hermite_function<S: Scalar>(k: usize, x: S) -> S {
    let (mant, acc) = psi_recurrence(k, S::SQRT_2() * x);
    mant * (acc + S::c(0.25 * std::f64::consts::LN_2)).exp()
}

/// E_k(x) in sign/log form, exact to the ends of the Gaussian tail.
pub fn hermite_function_scaled<S: Scalar>(k: usize, x: S) -> ScaledReal<S> {
    let (mant, acc) = psi_recurrence(k, S::SQRT_2() * x);
    scaled_from(mant, acc + S::c(0.25 * std::f64::consts::LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigenvalues;
    use crate::models::build_zero_temperature;
    use crate::special::quadrature::integrate;
    use crate::Cplx;

    #[test]
    fn low_degree_polynomials_exact() {
        assert_eq!(hermite_poly(0, 0.37f64).value(), 1.0);
        assert!((hermite_poly(1, 0.37f64).value() - 0.74).abs() < 1e-15);
        assert!((hermite_poly(2, 0.3f64).value() + 1.64).abs() < 1e-14);
        assert!((hermite_poly(2, 3.0f64).value() - 34.0).abs() < 1e-12);
    }

    #[test]
    fn degree_ten_frozen() {
        let v = hermite_poly(10, 0.7f64).value();
        assert!((v - 38802.8260350976).abs() < 1e-7 * v.abs(), "{v}");
    }

    #[test]
    fn huge_degree_stays_in_log_form() {
        let h = hermite_poly(1600, 3.0f64);
        assert!(h.ln_abs().is_finite());
        assert!(h.ln_abs() > 4000.0, "ln H_1600(3) = {}", h.ln_abs());
    }

    #[test]
    fn complex_frozen_point() {
        let v = hermite_poly_complex(6, Cplx::new(0.3, 0.2)).value();
        let want = Cplx::new(-78.41824, 80.587008);
        assert!((v - want).norm() < 1e-9 * want.norm(), "{v}");
    }

    #[test]
    fn complex_matches_real_on_axis() {
        let n = 50;
        let x = 1.3f64;
        let lp = hermite_poly_complex(n, Cplx::new(x, 0.0));
        let sr = hermite_poly(n, x);
        assert!((lp.log_magnitude() - sr.ln_abs()).abs() < 1e-11 * sr.ln_abs().abs());
        let want_phase = if sr.sign() > 0 { 0.0 } else { std::f64::consts::PI };
        assert!((lp.phase().abs() - want_phase).abs() < 1e-9);
    }

    #[test]
    fn derivative_identity() {
        // H_n' = 2 n H_{n-1}
        let n = 8;
        let x = 0.9f64;
        let h = 1e-6;
        let num = (hermite_poly(n, x + h).value() - hermite_poly(n, x - h).value()) / (2.0 * h);
        let want = 2.0 * n as f64 * hermite_poly(n - 1, x).value();
        assert!((num - want).abs() < 1e-6 * want.abs(), "{num} vs {want}");
    }

    #[test]
    fn ratio_matches_root_product() {
        // H_n(z) = 2^n prod (z - r_i) over the raw zero-temperature spectrum
        let n = 200usize;
        let z = Cplx::new(3.0, 2.0);
        let ratio = hermite_ratio_complex(n, z);
        // raw zero-temperature eigenvalues are exactly the H_n zeros
        let roots_n =
            eigenvalues(&build_zero_temperature::<f64>(n).unwrap(), 1e-13).unwrap();
        let roots_m =
            eigenvalues(&build_zero_temperature::<f64>(n - 1).unwrap(), 1e-13).unwrap();
        let mut log_ratio = Cplx::new(-std::f64::consts::LN_2, 0.0);
        for r in &roots_m {
            log_ratio += (z - r).ln();
        }
        for r in &roots_n {
            log_ratio -= (z - r).ln();
        }
        let want = log_ratio.exp();
        assert!((ratio - want).norm() < 1e-8 * want.norm(), "{ratio} vs {want}");
    }

    #[test]
    fn function_frozen_values() {
        let cases: [(usize, f64, f64); 7] = [
            (0, 0.0, 0.89324384173800233),
            (5, 0.3, 0.51553528492329587),
            (100, 5.0, -0.028348388197994999),
            (400, 10.0, 0.17882197782380718),
            (1600, 8.0, 0.045425987122600842),
            (50, 8.0, 0.0027127762077289254),
            (1600, 39.7076, 0.15419416470746892),
        ];
        for (k, x, want) in cases {
            let v = hermite_function(k, x);
            assert!(
                (v - want).abs() < 1e-10 * want.abs().max(1e-3),
                "E_{k}({x}) = {v} want {want}"
            );
        }
    }

    #[test]
    fn tail_log_value() {
        let s = hermite_function_scaled(1600, 44.0f64);
        assert_eq!(s.sign(), 1);
        assert!((s.ln_abs() + 98.975979847618674).abs() < 1e-8, "{}", s.ln_abs());
        assert!((s.value() - 1.0358052578559924e-43).abs() < 1e-52);
    }

    #[test]
    fn deep_tail_underflows_to_zero() {
        let plain = hermite_function(0, 50.0f64);
        assert_eq!(plain, 0.0, "exp(-2500) underflows");
        let s = hermite_function_scaled(0, 50.0f64);
        let want_ln = -2500.0 + 0.25 * std::f64::consts::LN_2
            - 0.25 * std::f64::consts::PI.ln();
        assert!((s.ln_abs() - want_ln).abs() < 1e-9 * want_ln.abs());
    }

    #[test]
    fn orthonormality() {
        let ip = |a: usize, b: usize| {
            integrate(
                |x| hermite_function(a, x) * hermite_function(b, x),
                -10.0,
                10.0,
                1e-11,
            )
        };
        assert!((ip(5, 5) - 1.0).abs() < 1e-9);
        assert!(ip(3, 5).abs() < 1e-9);
        assert!(ip(0, 4).abs() < 1e-9);
    }

    #[test]
    fn sup_norm_decay_rate() {
        // sup |E_k| decays like k^{-1/12}, peaking near the turning point
        for k in [50usize, 100, 200, 400] {
            let edge = (k as f64).sqrt();
            let mut sup = 0.0f64;
            for i in 0..=4000 {
                let x = edge * (0.85 + 0.3 * i as f64 / 4000.0);
                sup = sup.max(hermite_function(k, x).abs());
            }
            let scaled = sup * (k as f64).powf(1.0 / 12.0);
            assert!((scaled - 0.7585).abs() < 0.01, "k = {k}: {scaled}");
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let v = hermite_function(5, 0.3f32);
        assert!((v - 0.51553528f32).abs() < 1e-5);
        let p = hermite_poly(2, 0.3f32).value();
        assert!((p + 1.64).abs() < 1e-6);
    }
}
