//! Monte-Carlo campaigns and statistical reductions that turn asymptotic
//! statements into desk-scale pass/fail checks.
//!
//! Conventions: every campaign is keyed by (seed, stream) so trial t of a
//! run with seed s draws from `RngStream::new(s, t)`; reductions happen after
//! an ordered collect, so results do not depend on scheduling. Invalid trials
//! (eigensolver failures, weight-sum violations) are counted, never silently
//! dropped, and a campaign with more than 1% of them errors out.

use crate::eigen::{eigenvalues, spectrum, Spectrum};
use crate::error::{Error, Result};
use crate::models::{build_symmetric, EnsembleParams};
use crate::resolvent::{stieltjes_zero_temp_ratio, EtaFloor, SpectralDomain};
use crate::rng::{sample_chi, RngStream};
use crate::special::{
    hermite_function, pr_oscillatory, pr_transition, semicircle_cdf, semicircle_stieltjes,
    semiclassical_location,
};
use crate::stats::{ks_two_sample, linear_fit, pearson_corr, quantile, wilson_interval};
use crate::{Cplx, Real};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Recipe for building the per-n spectral domain of a sweep. The eta floor
/// depends on n, so campaigns carry this template and instantiate it for
/// each ensemble size.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DomainTemplate {
    pub epsilon: f64,
    pub delta: f64,
    pub n_e: usize,
    pub n_eta: usize,
    pub floor: EtaFloor,
}

impl DomainTemplate {
    pub fn build(&self, n: usize) -> Result<SpectralDomain> {
        SpectralDomain::build(n, self.epsilon, self.delta, self.n_e, self.n_eta, self.floor)
    }
}

impl Default for DomainTemplate {
    fn default() -> Self {
        DomainTemplate { epsilon: 0.1, delta: 0.2, n_e: 11, n_eta: 11, floor: EtaFloor::InverseN }
    }
}

/// Normalized trace of the resolvent from the eigenvalues alone.
fn trace_stieltjes(eigs_scaled: &[f64], z: Cplx) -> Cplx {
    let one = Cplx::new(1.0, 0.0);
    eigs_scaled
        .iter()
        .map(|&l| one / (Cplx::new(l, 0.0) - z))
        .sum::<Cplx>()
        / eigs_scaled.len() as f64
}

/// One sampled matrix swept over a spectral grid.
#[derive(Clone, Debug, Serialize)]
pub struct TrialResult {
    pub seed: u64,
    pub stream: u64,
    pub n: usize,
    pub beta: f64,
    /// sup over the grid of |s_n(z) - s_sc(z)|
    pub sup_error: f64,
    pub per_point: Vec<(Cplx, f64)>,
    pub valid: bool,
}

/// Sample one matrix at `params`, eigensolve it, and record the deviation of
/// its empirical Stieltjes transform from the semicircle law over the grid.
/// Solver failures are reported as an invalid trial, not an error.
pub fn run_local_law_trial(
    params: &EnsembleParams<Real>,
    domain: &SpectralDomain,
    seed: u64,
    stream: u64,
) -> TrialResult {
    let mut out = TrialResult {
        seed,
        stream,
        n: params.n,
        beta: params.beta,
        sup_error: f64::NAN,
        per_point: Vec::new(),
        valid: false,
    };
    if domain.grid.is_empty() {
        return out;
    }
    let mut rng = RngStream::new(seed, stream);
    let eigs = match build_symmetric(params, &mut rng).and_then(|(m, _)| eigenvalues(&m, 1e-12)) {
        Ok(e) => e,
        Err(_) => return out,
    };
    let scale = (2.0 * params.n as f64).sqrt();
    let scaled: Vec<f64> = eigs.iter().map(|l| l / scale).collect();
    let mut sup = 0.0f64;
    for &z in &domain.grid {
        let err = (trace_stieltjes(&scaled, z) - semicircle_stieltjes(z)).norm();
        sup = sup.max(err);
        out.per_point.push((z, err));
    }
    out.sup_error = sup;
    out.valid = true;
    out
}

/// Aggregate of a deviation campaign at one ensemble size.
#[derive(Clone, Debug, Serialize)]
pub struct CampaignSummary {
    pub n: usize,
    pub beta: f64,
    pub trials: usize,
    pub invalid: usize,
    pub threshold: f64,
    pub exceed_count: usize,
    pub exceed_fraction: f64,
    /// Wilson 95% interval for the exceed probability
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub sup_median: f64,
    pub sup_q90: f64,
    pub sup_max: f64,
}

/// Run `trials` independent trials at fixed parameters, trial t drawing from
/// stream t. Parallel, but collected in trial order.
pub fn run_trial_block(
    params: &EnsembleParams<Real>,
    domain: &SpectralDomain,
    trials: usize,
    seed: u64,
) -> Vec<TrialResult> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| run_local_law_trial(params, domain, seed, t))
        .collect()
}

/// Reduce a block of trials to exceedance statistics at threshold `c`.
/// Errors if more than 1% of the trials are invalid.
pub fn summarize_trials(results: &[TrialResult], c: f64) -> Result<CampaignSummary> {
    let trials = results.len();
    if trials == 0 {
        return Err(Error::param("results", "no trials to summarize"));
    }
    let invalid = results.iter().filter(|r| !r.valid).count();
    if invalid * 100 > trials {
        return Err(Error::NumericalFailure {
            message: format!(
                "campaign at n={} had {invalid}/{trials} invalid trials",
                results[0].n
            ),
            residual: invalid as f64,
        });
    }
    let sups: Vec<f64> = results.iter().filter(|r| r.valid).map(|r| r.sup_error).collect();
    let exceed_count = sups.iter().filter(|&&s| s > c).count();
    let valid = sups.len();
    let (wilson_low, wilson_high) = wilson_interval(exceed_count, valid, 1.959964);
    Ok(CampaignSummary {
        n: results[0].n,
        beta: results[0].beta,
        trials,
        invalid,
        threshold: c,
        exceed_count,
        exceed_fraction: exceed_count as f64 / valid as f64,
        wilson_low,
        wilson_high,
        sup_median: quantile(&sups, 0.5),
        sup_q90: quantile(&sups, 0.9),
        sup_max: sups.iter().fold(0.0f64, |a, &b| a.max(b)),
    })
}

/// For each n, run `trials` independent local-law trials and report the
/// fraction whose sup deviation exceeds `c`, with a Wilson 95% interval.
pub fn deviation_probability_campaign(
    ns: &[usize],
    beta: f64,
    c: f64,
    trials: usize,
    template: &DomainTemplate,
    seed: u64,
) -> Result<Vec<CampaignSummary>> {
    if trials < 100 {
        return Err(Error::param("trials", format!("campaign needs >= 100 trials, got {trials}")));
    }
    if !(c > 0.0) {
        return Err(Error::param("c", "threshold must be positive"));
    }
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = EnsembleParams::new(n, beta)?;
        let domain = template.build(n)?;
        let results = run_trial_block(&params, &domain, trials, seed);
        out.push(summarize_trials(&results, c)?);
    }
    Ok(out)
}

/// Deviations of the ordered spectrum from the semiclassical locations over
/// the bulk window.
#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub max_dev: f64,
    /// 1-based rank (counted from the largest eigenvalue) achieving max_dev
    pub argmax: usize,
    /// (rank, |lambda_(j) - gamma_j|) over the bulk
    pub deviations: Vec<(usize, f64)>,
}

/// Compare each bulk eigenvalue with its semiclassical location. Ranks run
/// from the top: j = 1 is the largest eigenvalue, matching the decreasing
/// quantile ordering of the locations.
pub fn rigidity_check(sp: &Spectrum<Real>, delta: f64) -> Result<RigidityReport> {
    let n = sp.eigs_scaled.len();
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::param("delta", "bulk trim must satisfy 0 < delta < 1/2"));
    }
    let lo = ((delta * n as f64).ceil() as usize).max(1);
    let hi = ((1.0 - delta) * n as f64).floor() as usize;
    if lo > hi {
        return Err(Error::param("delta", format!("bulk window empty for n = {n}")));
    }
    let mut deviations = Vec::with_capacity(hi - lo + 1);
    let mut max_dev = 0.0f64;
    let mut argmax = lo;
    for j in lo..=hi {
        let gamma = semiclassical_location(j, n)?;
        let lam = sp.eigs_scaled[n - j]; // ascending storage, rank from the top
        let dev = (lam - gamma).abs();
        if dev > max_dev {
            max_dev = dev;
            argmax = j;
        }
        deviations.push((j, dev));
    }
    Ok(RigidityReport { max_dev, argmax, deviations })
}

/// |N_I - n * semicircle mass of I| for I = [a, b], where N_I counts scaled
/// eigenvalues by binary search. `eta` is the resolvent scale the interval
/// is supposed to resolve; the precondition |I| >= max(2 eta,
/// (eta/tau) log(1/tau)) is enforced.
pub fn counting_check(sp: &Spectrum<Real>, a: f64, b: f64, eta: f64, tau: f64) -> Result<f64> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::param("interval", format!("need a < b, got [{a}, {b}]")));
    }
    if !(eta > 0.0) || !(tau > 0.0 && tau < 1.0) {
        return Err(Error::param("eta", "need eta > 0 and 0 < tau < 1"));
    }
    let len = b - a;
    let need = (2.0 * eta).max(eta / tau * (1.0 / tau).ln());
    if len < need {
        return Err(Error::param(
            "interval",
            format!("|I| = {len:.4} shorter than the resolvable scale {need:.4}"),
        ));
    }
    let eigs = &sp.eigs_scaled;
    let lo = eigs.partition_point(|&x| x < a);
    let hi = eigs.partition_point(|&x| x <= b);
    let observed = (hi - lo) as f64;
    let n = eigs.len() as f64;
    let mass = semicircle_cdf::<f64>(b.clamp(-1.0, 1.0)) - semicircle_cdf::<f64>(a.clamp(-1.0, 1.0));
    Ok((observed - n * mass).abs())
}

/// Two-sample comparison of eigen-derived first-row weights against directly
/// constructed normalized chi vectors.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub ks_statistic: f64,
    pub p_value_proxy: f64,
    /// sample correlation between the first weight and the bottom eigenvalue
    pub correlation: f64,
    pub trials: usize,
    pub invalid: usize,
}

fn ks_p_value_proxy(d: f64, m: usize, n: usize) -> f64 {
    let ne = (m as f64 * n as f64) / ((m + n) as f64);
    let t = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    let mut p = 0.0f64;
    let mut sign = 2.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * t * t).exp();
        p += sign * term;
        sign = -sign;
        if term < 1e-12 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// Pool sqrt(n) * q_1 over `trials` sampled matrices and compare its law
/// against the same functional of vectors built directly from independent
/// chi draws normalized to unit length. Also reports the correlation between
/// q_1^2 and the matching eigenvalue as an independence spot check.
pub fn first_row_independence_test(
    params: &EnsembleParams<Real>,
    trials: usize,
    seed: u64,
) -> Result<IndependenceReport> {
    if trials < 500 {
        return Err(Error::param("trials", format!("test needs >= 500 trials, got {trials}")));
    }
    let n = params.n;
    let rows: Vec<Option<(f64, f64, f64, f64)>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t);
            let sp = match build_symmetric(params, &mut rng).and_then(|(m, _)| spectrum(&m)) {
                Ok(sp) => sp,
                Err(_) => return None,
            };
            let wsum: f64 = sp.weights.iter().sum();
            if (wsum - 1.0).abs() > 1e-8 {
                return None;
            }
            let x = (n as f64).sqrt() * sp.weights[0].sqrt();
            // reference: n independent chi_beta entries, normalized
            let mut draws = Vec::with_capacity(n);
            for _ in 0..n {
                match sample_chi(params.beta, &mut rng) {
                    Ok(v) => draws.push(v),
                    Err(_) => return None,
                }
            }
            let norm = draws.iter().map(|v| v * v).sum::<f64>().sqrt();
            let y = (n as f64).sqrt() * draws[0] / norm;
            Some((x, y, sp.weights[0], sp.eigs_scaled[0]))
        })
        .collect();
    let invalid = rows.iter().filter(|r| r.is_none()).count();
    if invalid * 100 > trials {
        return Err(Error::NumericalFailure {
            message: format!("first-row test had {invalid}/{trials} invalid trials"),
            residual: invalid as f64,
        });
    }
    let kept: Vec<(f64, f64, f64, f64)> = rows.into_iter().flatten().collect();
    let xs: Vec<f64> = kept.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = kept.iter().map(|r| r.1).collect();
    let q1: Vec<f64> = kept.iter().map(|r| r.2).collect();
    let l1: Vec<f64> = kept.iter().map(|r| r.3).collect();
    let ks = ks_two_sample(&xs, &ys);
    Ok(IndependenceReport {
        ks_statistic: ks,
        p_value_proxy: ks_p_value_proxy(ks, xs.len(), ys.len()),
        correlation: pearson_corr(&q1, &l1),
        trials,
        invalid,
    })
}

/// Empirical tail of the weighted fluctuation sum at a fixed spectral point.
#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationReport {
    pub mean: Cplx,
    pub sigma_hat: f64,
    /// scale predicted by the variance proxy (1/n) sqrt(sum |lambda_j - z|^{-2})
    pub sigma_predicted: f64,
    /// (lambda, P(|X| > lambda * sigma_hat)) over the probed levels
    pub tail: Vec<(f64, f64)>,
    /// slope of log P against lambda^2 over the nonempty tail points
    pub slope: f64,
    pub trials: usize,
    pub invalid: usize,
}

/// Sample X = sum_j (q_j^2 - 1/n) / (lambda_j - z) over `trials` matrices
/// and fit the tail of |X| against a subgaussian profile.
pub fn concentration_check(
    params: &EnsembleParams<Real>,
    z: Cplx,
    trials: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    if trials < 100 {
        return Err(Error::param("trials", format!("check needs >= 100 trials, got {trials}")));
    }
    let n = params.n;
    if !(z.im > (n as f64).powf(-0.5)) {
        return Err(Error::param("z", format!("needs Im z > n^(-1/2), got {}", z.im)));
    }
    let rows: Vec<Option<(Cplx, f64)>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t);
            let sp = match build_symmetric(params, &mut rng).and_then(|(m, _)| spectrum(&m)) {
                Ok(sp) => sp,
                Err(_) => return None,
            };
            let mut x = Cplx::new(0.0, 0.0);
            let mut v = 0.0f64;
            let uniform = 1.0 / n as f64;
            for (&lam, &w) in sp.eigs_scaled.iter().zip(&sp.weights) {
                let d = Cplx::new(lam, 0.0) - z;
                x += (w - uniform) / d;
                v += 1.0 / d.norm_sqr();
            }
            Some((x, v.sqrt() / n as f64))
        })
        .collect();
    let invalid = rows.iter().filter(|r| r.is_none()).count();
    if invalid * 100 > trials {
        return Err(Error::NumericalFailure {
            message: format!("concentration check had {invalid}/{trials} invalid trials"),
            residual: invalid as f64,
        });
    }
    let kept: Vec<(Cplx, f64)> = rows.into_iter().flatten().collect();
    let count = kept.len() as f64;
    let mean = kept.iter().map(|r| r.0).sum::<Cplx>() / count;
    let sigma_hat =
        (kept.iter().map(|r| (r.0 - mean).norm_sqr()).sum::<f64>() / count).sqrt();
    let sigma_predicted = kept.iter().map(|r| r.1).sum::<f64>() / count;
    let mut tail = Vec::new();
    let mut fx = Vec::new();
    let mut fy = Vec::new();
    for i in 0..9 {
        let lambda = 1.0 + 0.25 * i as f64;
        let p = kept.iter().filter(|r| r.0.norm() > lambda * sigma_hat).count() as f64 / count;
        tail.push((lambda, p));
        if p > 0.0 {
            fx.push(lambda * lambda);
            fy.push(p.ln());
        }
    }
    if fx.len() < 2 {
        return Err(Error::NumericalFailure {
            message: "too few nonempty tail levels for a slope fit".into(),
            residual: fx.len() as f64,
        });
    }
    let (slope, _) = linear_fit(&fx, &fy);
    Ok(ConcentrationReport {
        mean,
        sigma_hat,
        sigma_predicted,
        tail,
        slope,
        trials,
        invalid,
    })
}

/// Deterministic deviation of the zero-temperature transform over one domain.
pub fn zero_temp_sup_error(n: usize, domain: &SpectralDomain) -> Result<f64> {
    if domain.grid.is_empty() {
        return Err(Error::param("domain", "grid is empty"));
    }
    let mut sup = 0.0f64;
    for &z in &domain.grid {
        let s = stieltjes_zero_temp_ratio(n, z)?;
        sup = sup.max((s - semicircle_stieltjes(z)).norm());
    }
    Ok(sup)
}

#[derive(Clone, Debug, Serialize)]
pub struct StudyReport {
    pub per_n: Vec<(usize, f64)>,
    /// log-log slope of sup error against n
    pub slope: f64,
}

/// Sweep the deterministic zero-temperature deviation over a list of sizes
/// and fit its decay rate.
pub fn zero_temp_convergence_study(ns: &[usize], template: &DomainTemplate) -> Result<StudyReport> {
    if ns.len() < 2 {
        return Err(Error::param("ns", "study needs at least two sizes"));
    }
    if ns.iter().any(|&n| n < 50) {
        return Err(Error::param("ns", "study sizes must be >= 50"));
    }
    let mut per_n = Vec::with_capacity(ns.len());
    for &n in ns {
        let domain = template.build(n)?;
        per_n.push((n, zero_temp_sup_error(n, &domain)?));
    }
    let xs: Vec<f64> = per_n.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = per_n.iter().map(|&(_, e)| e.ln()).collect();
    let (slope, _) = linear_fit(&xs, &ys);
    Ok(StudyReport { per_n, slope })
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticsRow {
    pub k: usize,
    /// max amplitude-relative error of the oscillatory form over |x| <= 0.8 sqrt(k)
    pub oscillatory_error: f64,
    /// max relative error of the transition form for x near sqrt(k)
    pub transition_error: f64,
    /// sup |E_k| over the transition window
    pub transition_amplitude: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticsReport {
    pub rows: Vec<AsymptoticsRow>,
    /// log-log slope of the oscillatory error against k (NaN with one k)
    pub oscillatory_slope: f64,
    /// log-log slope of the transition amplitude against k (NaN with one k)
    pub amplitude_exponent: f64,
}

/// Measure both asymptotic regimes of the Hermite functions against the
/// exact recurrence for each requested degree.
pub fn asymptotics_validation(ks: &[usize]) -> Result<AsymptoticsReport> {
    if ks.is_empty() {
        return Err(Error::param("ks", "need at least one degree"));
    }
    if ks.iter().any(|&k| k < 50) {
        return Err(Error::param("ks", "degrees must be >= 50"));
    }
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let rk = (k as f64).sqrt();
        // oscillatory band, error scaled by the local envelope
        let mut osc = 0.0f64;
        let m = 321;
        for i in 0..m {
            let u = -0.8 + 1.6 * i as f64 / (m - 1) as f64;
            let x = u * rk;
            let exact = hermite_function(k, x);
            let approx = pr_oscillatory(k, x)?;
            let envelope =
                (2.0 / std::f64::consts::PI).sqrt() * (k as f64).powf(-0.25)
                    / (1.0 - u * u).powf(0.25);
            osc = osc.max((approx - exact).abs() / envelope);
        }
        // transition band around x = sqrt(k)
        let mut trans = 0.0f64;
        let floor = 0.1 * (k as f64).powf(-1.0 / 12.0);
        let mt = 241;
        for i in 0..mt {
            let x = rk * (0.94 + 0.12 * i as f64 / (mt - 1) as f64);
            let exact = hermite_function(k, x);
            let approx = pr_transition(k, x)?;
            trans = trans.max((approx - exact).abs() / exact.abs().max(floor));
        }
        let mut amp = 0.0f64;
        let ma = 4001;
        for i in 0..ma {
            let x = rk * (0.85 + 0.30 * i as f64 / (ma - 1) as f64);
            amp = amp.max(hermite_function(k, x).abs());
        }
        rows.push(AsymptoticsRow {
            k,
            oscillatory_error: osc,
            transition_error: trans,
            transition_amplitude: amp,
        });
    }
    let (oscillatory_slope, amplitude_exponent) = if rows.len() >= 2 {
        let lk: Vec<f64> = rows.iter().map(|r| (r.k as f64).ln()).collect();
        let le: Vec<f64> = rows.iter().map(|r| r.oscillatory_error.ln()).collect();
        let la: Vec<f64> = rows.iter().map(|r| r.transition_amplitude.ln()).collect();
        (linear_fit(&lk, &le).0, linear_fit(&lk, &la).0)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(AsymptoticsReport { rows, oscillatory_slope, amplitude_exponent })
}

/// Worst normalized partial sum of E_k E_l / (n E_{n-1}^2) over the ordered
/// zero-temperature eigenvalues, divided by the predicted envelope
/// k^{-1/4} l^{-1/4} (sqrt(k) - sqrt(l))^{-1} n^{0.05}.
pub fn partial_sum_bound_check(n: usize, k: usize, l: usize) -> Result<f64> {
    if !(1 <= l && l < k && k <= n) {
        return Err(Error::param("k", format!("need 1 <= l < k <= n, got l={l}, k={k}, n={n}")));
    }
    let m = crate::models::build_zero_temperature::<f64>(n)?;
    let raw = eigenvalues(&m, 1e-13)?;
    let mut worst = 0.0f64;
    let mut acc = 0.0f64;
    for &r in &raw {
        let x = r / 2.0f64.sqrt();
        let ek = hermite_function(k, x);
        let el = hermite_function(l, x);
        let base = hermite_function(n - 1, x);
        acc += ek * el / (n as f64 * base * base);
        worst = worst.max(acc.abs());
    }
    let kf = k as f64;
    let lf = l as f64;
    let envelope = kf.powf(-0.25) * lf.powf(-0.25) / (kf.sqrt() - lf.sqrt())
        * (n as f64).powf(0.05);
    Ok(worst / envelope)
}
