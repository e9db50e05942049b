//! Small statistics toolkit used by the experiment layer: KS distances,
//! Wilson score intervals, least-squares fits, quantiles, correlation.

fn sorted_copy(a: &[f64]) -> Vec<f64> {
    let mut v = a.to_vec();
    v.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

/// Two-sample Kolmogorov-Smirnov statistic, tie-safe.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "empty sample");
    let xs = sorted_copy(a);
    let ys = sorted_copy(b);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// One-sample KS statistic of `sample` against the reference CDF.
pub fn ks_vs_cdf(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!sample.is_empty(), "empty sample");
    let xs = sorted_copy(sample);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Wilson score interval for a binomial proportion at critical value `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Least-squares line through (x, y): returns (slope, intercept).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert!(x.len() == y.len() && x.len() >= 2, "need matched samples");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Pearson correlation coefficient.
pub fn pearson_corr(x: &[f64], y: &[f64]) -> f64 {
    assert!(x.len() == y.len() && x.len() >= 2, "need matched samples");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
        sxy += (a - mx) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Interpolated quantile, q in [0, 1].
pub fn quantile(data: &[f64], q: f64) -> f64 {
    assert!(!data.is_empty() && (0.0..=1.0).contains(&q), "bad quantile input");
    let xs = sorted_copy(data);
    let pos = q * (xs.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 < xs.len() {
        xs[lo] * (1.0 - frac) + xs[lo + 1] * frac
    } else {
        xs[lo]
    }
}

pub fn median(data: &[f64]) -> f64 {
    quantile(data, 0.5)
}
