//! Airy function Ai and its derivative on the real line, double precision.
//!
//! Maclaurin series on [-6, 6], asymptotic expansions beyond; the branches
//! agree to better than 1e-9 at the switch points.

use std::f64::consts::PI;

// Ai(0) and -Ai'(0)
const C1: f64 = 0.35502805388781723926;
const C2: f64 = 0.25881940379280679840;

const SWITCH: f64 = 6.0;

fn series(x: f64) -> (f64, f64) {
    // f, g solve w'' = x w with (f, f')(0) = (1, 0), (g, g')(0) = (0, 1)
    let x3 = x * x * x;
    let mut f = 0.0;
    let mut t = 1.0;
    let mut k = 0usize;
    loop {
        f += t;
        t *= x3 / (((3 * k + 2) * (3 * k + 3)) as f64);
        k += 1;
        if t.abs() < 1e-18 * f.abs().max(1.0) || k > 200 {
            break;
        }
    }
    let mut g = 0.0;
    let mut u = x;
    k = 0;
    loop {
        g += u;
        u *= x3 / (((3 * k + 3) * (3 * k + 4)) as f64);
        k += 1;
        if u.abs() < 1e-18 * g.abs().max(1.0) || k > 200 {
            break;
        }
    }
    let ai = C1 * f - C2 * g;

    let mut fp = 0.0;
    let mut c = x * x / 2.0;
    k = 1;
    loop {
        fp += c;
        c *= x3 / (((3 * k) * (3 * k + 2)) as f64);
        k += 1;
        if c.abs() < 1e-18 * fp.abs().max(1.0) || k > 200 {
            break;
        }
    }
    let mut gp = 0.0;
    let mut d = 1.0;
    k = 0;
    loop {
        gp += d;
        d *= x3 / (((3 * k + 1) * (3 * k + 3)) as f64);
        k += 1;
        if d.abs() < 1e-18 * gp.abs().max(1.0) || k > 200 {
            break;
        }
    }
    (ai, C1 * fp - C2 * gp)
}

// coefficient ladders of the asymptotic expansions
fn asym_terms(xi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut us = Vec::with_capacity(24);
    let mut vs = Vec::with_capacity(24);
    let mut u = 1.0f64;
    for k in 0..24usize {
        us.push(u);
        vs.push(u * ((6 * k + 1) as f64) / ((1 - 6 * k as i64) as f64));
        u *= ((6 * k + 1) * (6 * k + 5)) as f64 / (72.0 * (k as f64 + 1.0));
        if u / xi.powi(k as i32 + 1) > us[k] / xi.powi(k as i32) {
            break; // divergent tail reached
        }
    }
    (us, vs)
}

fn asym_pos(x: f64) -> (f64, f64) {
    let xi = 2.0 / 3.0 * x.powf(1.5);
    let (us, vs) = asym_terms(xi);
    let mut s = 0.0f64;
    let mut sp = 0.0f64;
    let mut pw = 1.0;
    let mut sign = 1.0;
    for (u, v) in us.iter().zip(&vs) {
        let term = sign * u / pw;
        let termp = sign * v / pw;
        if term.abs() < 1e-18 * s.abs().max(1.0) {
            break;
        }
        s += term;
        sp += termp;
        pw *= xi;
        sign = -sign;
    }
    let front = (-xi).exp() / (2.0 * PI.sqrt());
    (front * s / x.powf(0.25), -front * sp * x.powf(0.25))
}

fn asym_neg(x: f64) -> (f64, f64) {
    let ax = -x;
    let xi = 2.0 / 3.0 * ax.powf(1.5);
    let (us, vs) = asym_terms(xi);
    // split the ladders into even (P, R) and odd (Q, S) partial sums
    let (mut p, mut q, mut r, mut s) = (0.0, 0.0, 0.0, 0.0);
    let mut pw = 1.0;
    for (j, (u, v)) in us.iter().zip(&vs).enumerate() {
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * u / pw;
        let termv = sign * v / pw;
        if term.abs() < 1e-18 {
            break;
        }
        if j % 2 == 0 {
            p += term;
            r += termv;
        } else {
            q += term;
            s += termv;
        }
        pw *= xi;
    }
    let arg = xi + PI / 4.0;
    let root = PI.sqrt();
    let ai = (arg.sin() * p - arg.cos() * q) / (root * ax.powf(0.25));
    let aip = -(arg.cos() * r + arg.sin() * s) * ax.powf(0.25) / root;
    (ai, aip)
}

fn eval(x: f64) -> (f64, f64) {
    if x.abs() <= SWITCH {
        series(x)
    } else if x > 0.0 {
        asym_pos(x)
    } else {
        asym_neg(x)
    }
}

/// Airy function of the first kind.
pub fn airy(x: f64) -> f64 {
    eval(x).0
}

/// Derivative of the Airy function of the first kind.
pub fn airy_prime(x: f64) -> f64 {
    eval(x).1
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFS: [(f64, f64, f64); 15] = [
        (0.0, 0.35502805388781724, -0.2588194037928068),
        (0.5, 0.23169360648083349, -0.22491053266468389),
        (-0.5, 0.47572809161053959, -0.20408167033954739),
        (2.0, 0.034924130423274379, -0.053090384433653632),
        (-2.0, 0.22740742820168558, 0.61825902074169104),
        (5.5, 3.3685311908599814e-5, -8.0463391305565143e-5),
        (-5.5, 0.017781541276574976, 0.86419721777139839),
        (6.0, 9.9476943602528896e-6, -2.4765200397034955e-5),
        (-6.0, -0.32914517362982311, 0.34593548728134289),
        (6.5, 2.7958823432049136e-6, -7.2319314666017926e-6),
        (10.0, 1.1047532552898686e-10, -3.5206336767389236e-10),
        (-10.0, 0.040241238486443191, 0.99626504413279006),
        (-25.5, -0.24407246181912133, -0.29955061147614896),
        (-55.0, 0.11802664257163335, 1.263265357847369),
        (53.0, 2.0202303473124253e-113, -1.4717012942302618e-112),
    ];

    #[test]
    fn reference_values() {
        for &(x, ai, aip) in &REFS {
            let a = airy(x);
            let ap = airy_prime(x);
            assert!((a - ai).abs() <= 5e-9 * ai.abs() + 1e-12, "Ai({x}) = {a} want {ai}");
            assert!(
                (ap - aip).abs() <= 5e-9 * aip.abs() + 5e-12,
                "Ai'({x}) = {ap} want {aip}"
            );
        }
    }

    #[test]
    fn branch_agreement_at_switch() {
        for x in [SWITCH, -SWITCH] {
            let (s, sp) = series(x);
            let (a, ap) = if x > 0.0 { asym_pos(x) } else { asym_neg(x) };
            assert!((s - a).abs() < 1e-9, "Ai branches at {x}: {s} vs {a}");
            assert!((sp - ap).abs() < 1e-9, "Ai' branches at {x}: {sp} vs {ap}");
        }
    }

    #[test]
    fn leading_asymptotic_scale() {
        // Ai(6) * 2 sqrt(pi) * 6^{1/4} * exp((2/3) 6^{3/2}) is close to 1
        let v = airy(6.0) * 2.0 * PI.sqrt() * 6.0f64.powf(0.25) * (2.0 / 3.0 * 6.0f64.powf(1.5)).exp();
        assert!((v - 0.993263995).abs() < 1e-6, "{v}");
    }

    #[test]
    fn satisfies_airy_equation() {
        // second difference reproduces x * Ai(x)
        for &x in &[1.3f64, -2.7, 0.4, -5.1] {
            let h = 1e-4;
            let dd = (airy(x + h) - 2.0 * airy(x) + airy(x - h)) / (h * h);
            let want = x * airy(x);
            assert!((dd - want).abs() < 1e-5 * want.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn derivative_consistent_with_difference() {
        for &x in &[0.7f64, -1.9, 3.2, -4.4] {
            let h = 1e-6;
            let d = (airy(x + h) - airy(x - h)) / (2.0 * h);
            assert!((d - airy_prime(x)).abs() < 1e-8, "x = {x}");
        }
    }
}
