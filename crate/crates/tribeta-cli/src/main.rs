//! Command-line front end binding flag/file configs to the experiment
//! library and emitting self-describing CSV or JSON outputs.
//!
//! Exit codes: 0 success, 1 when the computation succeeded but a tracked
//! threshold was violated, 2 for usage or runtime errors.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tribeta::eigen::spectrum;
use tribeta::experiments::{
    asymptotics_validation, concentration_check, counting_check, first_row_independence_test,
    partial_sum_bound_check, rigidity_check, run_trial_block, summarize_trials,
    zero_temp_convergence_study, DomainTemplate,
};
use tribeta::models::{build_symmetric, EnsembleParams};
use tribeta::resolvent::{audit_prop_r_bounds, expansion_trace, stieltjes_from_spectrum, EtaFloor};
use tribeta::rng::RngStream;
use tribeta::special::{
    airy, airy_prime, hermite_function, pr_oscillatory, pr_transition, semicircle_cdf,
    semicircle_density, semicircle_quantile, semicircle_stieltjes,
};
use tribeta::{Cplx, Error, Result};

use config::{load_file, parse_axis, parse_usize_list, FileConfig};
use output::{emit, Format, RunOutput};

#[derive(Parser)]
#[command(name = "tribeta", version, about = "Tridiagonal beta-ensemble spectra and semicircle-law experiments")]
struct Cli {
    /// JSON file supplying defaults for the flags; flags override it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (written atomically); stdout when absent
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; RAYON_NUM_THREADS is honored when absent
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct DrawArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct StieltjesArgs {
    #[command(flatten)]
    draw: DrawArgs,
    /// Real part axis: `value` or `start,stop,count`
    #[arg(long, allow_hyphen_values = true)]
    grid_re: Option<String>,
    /// Imaginary part axis (geometric): `value` or `start,stop,count`
    #[arg(long, allow_hyphen_values = true)]
    grid_im: Option<String>,
}

#[derive(Args)]
struct StudyArgs {
    /// Comma list of matrix sizes
    #[arg(long)]
    ns: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FloorChoice {
    /// eta down to n^(-1+epsilon)
    Full,
    /// eta down to n^(-1/2+epsilon)
    Sqrt,
}

#[derive(Args)]
struct LocalLawArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Comma list of sizes; overrides --n
    #[arg(long)]
    ns: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Deviation threshold defining an exceedance
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, value_enum)]
    floor: Option<FloorChoice>,
}

#[derive(Args)]
struct RigidityArgs {
    #[command(flatten)]
    draw: DrawArgs,
    #[arg(long)]
    trials: Option<usize>,
    /// Bulk trim fraction
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
}

#[derive(Args)]
struct CountingArgs {
    #[command(flatten)]
    draw: DrawArgs,
    #[arg(long)]
    trials: Option<usize>,
    /// Interval endpoints on the scaled spectral axis
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Resolvent scale the interval must resolve
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    draw: DrawArgs,
    #[arg(long)]
    trials: Option<usize>,
    /// Truncation order of the expansion
    #[arg(long)]
    m_order: Option<usize>,
    /// Evaluation point, real part (single value)
    #[arg(long, allow_hyphen_values = true)]
    grid_re: Option<String>,
    /// Evaluation point, imaginary part (single value)
    #[arg(long, allow_hyphen_values = true)]
    grid_im: Option<String>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    /// Comma list of Hermite degrees
    #[arg(long)]
    ks: Option<String>,
}

#[derive(Args)]
struct TrialArgs {
    #[command(flatten)]
    draw: DrawArgs,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct ConcentrationArgs {
    #[command(flatten)]
    draw: DrawArgs,
    #[arg(long)]
    trials: Option<usize>,
    /// Evaluation point, real part (single value)
    #[arg(long, allow_hyphen_values = true)]
    grid_re: Option<String>,
    /// Evaluation point, imaginary part (single value)
    #[arg(long, allow_hyphen_values = true)]
    grid_im: Option<String>,
}

#[derive(Args)]
struct PartialSumArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Higher Hermite degree
    #[arg(long)]
    k: Option<usize>,
    /// Lower Hermite degree
    #[arg(long)]
    l: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SpecialFn {
    Hermite,
    Oscillatory,
    Transition,
    Airy,
    AiryPrime,
    SemicircleDensity,
    SemicircleCdf,
    SemicircleQuantile,
}

#[derive(Args)]
struct SpecialEvalArgs {
    /// Function to evaluate
    #[arg(long = "fn", value_enum)]
    function: SpecialFn,
    /// Degree for the Hermite-family functions
    #[arg(long)]
    k: Option<usize>,
    /// Abscissa axis: `value` or `start,stop,count`
    #[arg(long, allow_hyphen_values = true)]
    grid_re: Option<String>,
}

#[derive(Subcommand)]
enum SpecialAction {
    /// Evaluate one function over a grid
    Eval(SpecialEvalArgs),
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw one tridiagonal matrix and emit its bands
    Sample(DrawArgs),
    /// Scaled eigenvalues and first-component weights of one draw
    Spectrum(DrawArgs),
    /// Stieltjes transform of one draw over a grid, against the semicircle law
    Stieltjes(StieltjesArgs),
    /// Deterministic zero-temperature convergence sweep
    ZeroTempStudy(StudyArgs),
    /// Deviation-probability campaign for the local semicircle law
    LocalLaw(LocalLawArgs),
    /// Bulk eigenvalue rigidity against semiclassical locations
    Rigidity(RigidityArgs),
    /// Interval eigenvalue counts against semicircle mass
    Counting(CountingArgs),
    /// Stratified audit of resolvent entry bounds
    ResolventAudit(AuditArgs),
    /// Expansion of the resolvent trace around zero temperature
    ResolventExpand(ExpandArgs),
    /// Accuracy sweep of the Hermite asymptotic regimes
    Asymptotics(AsymptoticsArgs),
    /// First-row weight law against direct chi construction
    FirstRow(TrialArgs),
    /// Tail of the weighted spectral fluctuation sum
    Concentration(ConcentrationArgs),
    /// Normalized partial sums of eigenvector products
    PartialSum(PartialSumArgs),
    /// Special-function evaluation helpers
    Special {
        #[command(subcommand)]
        action: SpecialAction,
    },
}

fn main() -> ExitCode {
    ExitCode::from(execute(Cli::parse()))
}

fn execute(cli: Cli) -> u8 {
    let file = match &cli.config {
        Some(p) => match load_file(p) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        None => FileConfig::default(),
    };
    if let Some(t) = cli.threads.or(file.threads) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let out_path = cli.out.clone().or_else(|| file.out.clone());
    let format = cli.format.or(file.format).unwrap_or(Format::Csv);
    match run_command(&cli.cmd, &file) {
        Ok((out, threshold_ok)) => {
            if let Err(e) = emit(&out, out_path.as_deref(), format) {
                eprintln!("error: cannot write output: {e}");
                return 2;
            }
            if threshold_ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            // flush a marker document so partial runs are identifiable
            let mut out = RunOutput::new(command_name(&cli.cmd));
            out.status = "failed".into();
            out.summary = json!({ "error": e.to_string() });
            if let Some(p) = &out_path {
                let _ = emit(&out, Some(p), format);
            }
            2
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Sample(_) => "sample",
        Cmd::Spectrum(_) => "spectrum",
        Cmd::Stieltjes(_) => "stieltjes",
        Cmd::ZeroTempStudy(_) => "zero-temp-study",
        Cmd::LocalLaw(_) => "local-law",
        Cmd::Rigidity(_) => "rigidity",
        Cmd::Counting(_) => "counting",
        Cmd::ResolventAudit(_) => "resolvent-audit",
        Cmd::ResolventExpand(_) => "resolvent-expand",
        Cmd::Asymptotics(_) => "asymptotics",
        Cmd::FirstRow(_) => "first-row",
        Cmd::Concentration(_) => "concentration",
        Cmd::PartialSum(_) => "partial-sum",
        Cmd::Special { .. } => "special-eval",
    }
}

fn run_command(cmd: &Cmd, f: &FileConfig) -> Result<(RunOutput, bool)> {
    match cmd {
        Cmd::Sample(a) => cmd_sample(a, f),
        Cmd::Spectrum(a) => cmd_spectrum(a, f),
        Cmd::Stieltjes(a) => cmd_stieltjes(a, f),
        Cmd::ZeroTempStudy(a) => cmd_zero_temp_study(a, f),
        Cmd::LocalLaw(a) => cmd_local_law(a, f),
        Cmd::Rigidity(a) => cmd_rigidity(a, f),
        Cmd::Counting(a) => cmd_counting(a, f),
        Cmd::ResolventAudit(a) => cmd_audit(a, f),
        Cmd::ResolventExpand(a) => cmd_expand(a, f),
        Cmd::Asymptotics(a) => cmd_asymptotics(a, f),
        Cmd::FirstRow(a) => cmd_first_row(a, f),
        Cmd::Concentration(a) => cmd_concentration(a, f),
        Cmd::PartialSum(a) => cmd_partial_sum(a, f),
        Cmd::Special { action: SpecialAction::Eval(a) } => cmd_special_eval(a, f),
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

struct Draw {
    n: usize,
    beta: f64,
    seed: u64,
}

fn resolve_draw(a: &DrawArgs, f: &FileConfig, default_n: usize) -> Draw {
    Draw {
        n: a.n.or(f.n).unwrap_or(default_n),
        beta: a.beta.or(f.beta).unwrap_or(2.0),
        seed: a.seed.or(f.seed).unwrap_or(0),
    }
}

fn echo_draw(out: &mut RunOutput, d: &Draw) {
    out.set("n", d.n);
    out.set("beta", fmt(d.beta));
    out.set("seed", d.seed);
}

fn resolve_ns(
    flag: &Option<String>,
    file: &Option<Vec<usize>>,
    fallback: &[usize],
) -> Result<Vec<usize>> {
    match (flag, file) {
        (Some(s), _) => parse_usize_list("ns", s),
        (None, Some(v)) if !v.is_empty() => Ok(v.clone()),
        _ => Ok(fallback.to_vec()),
    }
}

fn resolve_floor(
    flag: Option<FloorChoice>,
    file: &Option<String>,
    fallback: FloorChoice,
) -> Result<EtaFloor> {
    let choice = match (flag, file) {
        (Some(c), _) => c,
        (None, Some(s)) => match s.as_str() {
            "full" => FloorChoice::Full,
            "sqrt" => FloorChoice::Sqrt,
            other => {
                return Err(Error::param("floor", format!("`{other}` is not `full` or `sqrt`")))
            }
        },
        (None, None) => fallback,
    };
    Ok(match choice {
        FloorChoice::Full => EtaFloor::InverseN,
        FloorChoice::Sqrt => EtaFloor::InverseSqrtN,
    })
}

/// Parse a grid flag that must denote a single point.
fn resolve_point(
    name: &'static str,
    flag: &Option<String>,
    file: &Option<String>,
    fallback: f64,
) -> Result<f64> {
    match flag.as_ref().or(file.as_ref()) {
        Some(s) => {
            let axis = parse_axis(name, s, false)?;
            if axis.len() != 1 {
                return Err(Error::param(name, "this command takes a single point"));
            }
            Ok(axis[0])
        }
        None => Ok(fallback),
    }
}

fn cmd_sample(a: &DrawArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(a, f, 200);
    let params = EnsembleParams::new(d.n, d.beta)?;
    let (m, _) = build_symmetric(&params, &mut RngStream::new(d.seed, 0))?;
    let mut out = RunOutput::new("sample");
    echo_draw(&mut out, &d);
    out.columns(&["index", "diag", "offdiag"]);
    for i in 0..d.n {
        let off = if i + 1 < d.n { fmt(m.offdiag[i]) } else { String::new() };
        out.row(vec![i.to_string(), fmt(m.diag[i]), off]);
    }
    out.summary = json!({ "n": d.n, "offdiag_count": d.n - 1 });
    Ok((out, true))
}

fn cmd_spectrum(a: &DrawArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(a, f, 200);
    let params = EnsembleParams::new(d.n, d.beta)?;
    let (m, _) = build_symmetric(&params, &mut RngStream::new(d.seed, 0))?;
    let sp = spectrum(&m)?;
    let mut out = RunOutput::new("spectrum");
    echo_draw(&mut out, &d);
    out.columns(&["index", "eig_scaled", "weight"]);
    for (i, (&l, &w)) in sp.eigs_scaled.iter().zip(&sp.weights).enumerate() {
        out.row(vec![i.to_string(), fmt(l), fmt(w)]);
    }
    let wsum: f64 = sp.weights.iter().sum();
    out.summary = json!({
        "n": d.n,
        "weight_sum": wsum,
        "min_eig": sp.eigs_scaled.first(),
        "max_eig": sp.eigs_scaled.last(),
    });
    Ok((out, true))
}

fn cmd_stieltjes(a: &StieltjesArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(&a.draw, f, 200);
    let re_spec = a.grid_re.clone().or_else(|| f.grid_re.clone()).unwrap_or("-0.8,0.8,9".into());
    let im_spec = a.grid_im.clone().or_else(|| f.grid_im.clone()).unwrap_or("0.05,0.4,4".into());
    let res = parse_axis("grid-re", &re_spec, false)?;
    let ims = parse_axis("grid-im", &im_spec, true)?;
    let params = EnsembleParams::new(d.n, d.beta)?;
    let (m, _) = build_symmetric(&params, &mut RngStream::new(d.seed, 0))?;
    let sp = spectrum(&m)?;
    let mut out = RunOutput::new("stieltjes");
    echo_draw(&mut out, &d);
    out.set("grid_re", &re_spec);
    out.set("grid_im", &im_spec);
    out.columns(&["re", "im", "s_re", "s_im", "semicircle_dev"]);
    let mut max_dev = 0.0f64;
    for &im in &ims {
        for &re in &res {
            let z = Cplx::new(re, im);
            let s = stieltjes_from_spectrum(&sp, z);
            let dev = (s - semicircle_stieltjes(z)).norm();
            max_dev = max_dev.max(dev);
            out.row(vec![fmt(re), fmt(im), fmt(s.re), fmt(s.im), fmt(dev)]);
        }
    }
    out.summary = json!({ "points": res.len() * ims.len(), "max_semicircle_dev": max_dev });
    Ok((out, true))
}

fn cmd_zero_temp_study(a: &StudyArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let ns = resolve_ns(&a.ns, &f.ns, &[100, 200, 400, 800, 1600])?;
    let epsilon = a.epsilon.or(f.epsilon).unwrap_or(0.1);
    let delta = a.delta.or(f.delta).unwrap_or(0.2);
    let template = DomainTemplate { epsilon, delta, ..DomainTemplate::default() };
    let report = zero_temp_convergence_study(&ns, &template)?;
    let mut out = RunOutput::new("zero-temp-study");
    out.set("ns", ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
    out.set("epsilon", fmt(epsilon));
    out.set("delta", fmt(delta));
    out.set("seed", 0);
    out.columns(&["n", "sup_error"]);
    for &(n, e) in &report.per_n {
        out.row(vec![n.to_string(), fmt(e)]);
    }
    let window = (-1.3, -0.7);
    let ok = report.slope >= window.0 && report.slope <= window.1;
    out.summary = json!({
        "slope": report.slope,
        "slope_window": [window.0, window.1],
        "threshold_ok": ok,
    });
    Ok((out, ok))
}

fn cmd_local_law(a: &LocalLawArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let single = a.n.or(f.n).unwrap_or(500);
    let ns = resolve_ns(&a.ns, &f.ns, &[single])?;
    let beta = a.beta.or(f.beta).unwrap_or(2.0);
    let seed = a.seed.or(f.seed).unwrap_or(0);
    let trials = a.trials.or(f.trials).unwrap_or(100);
    let c = a.c.or(f.c).unwrap_or(0.1);
    let epsilon = a.epsilon.or(f.epsilon).unwrap_or(0.1);
    let delta = a.delta.or(f.delta).unwrap_or(0.2);
    let floor = resolve_floor(a.floor, &f.floor, FloorChoice::Sqrt)?;
    let template = DomainTemplate { epsilon, delta, n_e: 11, n_eta: 11, floor };
    let mut out = RunOutput::new("local-law");
    out.set("ns", ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
    out.set("beta", fmt(beta));
    out.set("seed", seed);
    out.set("trials", trials);
    out.set("c", fmt(c));
    out.set("epsilon", fmt(epsilon));
    out.set("delta", fmt(delta));
    out.set("floor", format!("{floor:?}"));
    out.columns(&["n", "trial", "sup_error", "valid"]);
    let mut summaries = Vec::new();
    for &n in &ns {
        let params = EnsembleParams::new(n, beta)?;
        let domain = template.build(n)?;
        let block = run_trial_block(&params, &domain, trials, seed);
        for r in &block {
            out.row(vec![
                n.to_string(),
                r.stream.to_string(),
                fmt(r.sup_error),
                r.valid.to_string(),
            ]);
        }
        summaries.push(summarize_trials(&block, c)?);
    }
    out.summary = json!({ "campaign": summaries });
    Ok((out, true))
}

fn cmd_rigidity(a: &RigidityArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(&a.draw, f, 500);
    let trials = a.trials.or(f.trials).unwrap_or(1);
    let delta = a.delta.or(f.delta).unwrap_or(0.1);
    let params = EnsembleParams::new(d.n, d.beta)?;
    let mut out = RunOutput::new("rigidity");
    echo_draw(&mut out, &d);
    out.set("trials", trials);
    out.set("delta", fmt(delta));
    out.columns(&["trial", "max_dev", "argmax", "valid"]);
    let mut max_devs = Vec::new();
    let mut invalid = 0usize;
    for t in 0..trials as u64 {
        let mut rng = RngStream::new(d.seed, t);
        let rep = build_symmetric(&params, &mut rng)
            .and_then(|(m, _)| spectrum(&m))
            .and_then(|sp| rigidity_check(&sp, delta));
        match rep {
            Ok(rep) => {
                out.row(vec![
                    t.to_string(),
                    fmt(rep.max_dev),
                    rep.argmax.to_string(),
                    "true".into(),
                ]);
                max_devs.push(rep.max_dev);
            }
            Err(e) => {
                if let Error::InvalidParameter { .. } = e {
                    return Err(e); // bad arguments, not a failed trial
                }
                out.row(vec![t.to_string(), "NaN".into(), String::new(), "false".into()]);
                invalid += 1;
            }
        }
    }
    if max_devs.is_empty() {
        return Err(Error::NumericalFailure {
            message: "all rigidity trials failed".into(),
            residual: invalid as f64,
        });
    }
    max_devs.sort_by(f64::total_cmp);
    let median = max_devs[max_devs.len() / 2];
    out.summary = json!({
        "trials": trials,
        "invalid": invalid,
        "median_max_dev": median,
        "log_n_over_n": (d.n as f64).ln() / d.n as f64,
    });
    Ok((out, true))
}

fn cmd_counting(a: &CountingArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(&a.draw, f, 1000);
    let trials = a.trials.or(f.trials).unwrap_or(100);
    let lo = a.a.or(f.a).unwrap_or(0.1);
    let hi = a.b.or(f.b).unwrap_or(0.4);
    let eta = a.eta.or(f.eta).unwrap_or((d.n as f64).powf(-0.9));
    let tau = a.tau.or(f.tau).unwrap_or(0.05);
    // validate the interval before any sampling work
    let probe = tribeta::eigen::Spectrum { eigs_scaled: vec![0.0], weights: vec![1.0] };
    counting_check(&probe, lo, hi, eta, tau)?;
    let params = EnsembleParams::new(d.n, d.beta)?;
    let mut out = RunOutput::new("counting");
    echo_draw(&mut out, &d);
    out.set("trials", trials);
    out.set("a", fmt(lo));
    out.set("b", fmt(hi));
    out.set("eta", fmt(eta));
    out.set("tau", fmt(tau));
    out.columns(&["trial", "count_dev", "valid"]);
    let mut devs = Vec::new();
    let mut invalid = 0usize;
    for t in 0..trials as u64 {
        let mut rng = RngStream::new(d.seed, t);
        let dev = build_symmetric(&params, &mut rng)
            .and_then(|(m, _)| spectrum(&m))
            .and_then(|sp| counting_check(&sp, lo, hi, eta, tau));
        match dev {
            Ok(dev) => {
                out.row(vec![t.to_string(), fmt(dev), "true".into()]);
                devs.push(dev);
            }
            Err(_) => {
                out.row(vec![t.to_string(), "NaN".into(), "false".into()]);
                invalid += 1;
            }
        }
    }
    if devs.is_empty() {
        return Err(Error::NumericalFailure {
            message: "all counting trials failed".into(),
            residual: invalid as f64,
        });
    }
    let q95 = tribeta::stats::quantile(&devs, 0.95);
    let budget = 0.05 * d.n as f64 * (hi - lo);
    let ok = q95 < budget;
    out.summary = json!({
        "trials": trials,
        "invalid": invalid,
        "q95": q95,
        "budget": budget,
        "threshold_ok": ok,
    });
    Ok((out, ok))
}

fn cmd_audit(a: &AuditArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let n = a.n.or(f.n).unwrap_or(500);
    let epsilon = a.epsilon.or(f.epsilon).unwrap_or(0.2);
    let audit = audit_prop_r_bounds(n, epsilon)?;
    let mut out = RunOutput::new("resolvent-audit");
    out.set("n", n);
    out.set("epsilon", fmt(epsilon));
    out.set("seed", 0);
    out.columns(&["stratum", "max_ratio", "fitted_constant"]);
    let strata = [
        ("diag", &audit.diag),
        ("diag_resonant", &audit.diag_resonant),
        ("offdiag", &audit.offdiag),
    ];
    let mut ok = true;
    for (name, rep) in strata {
        ok &= rep.max_ratio <= 10.0 * rep.fitted_constant;
        out.row(vec![name.into(), fmt(rep.max_ratio), fmt(rep.fitted_constant)]);
    }
    out.summary = json!({ "report": audit, "threshold_ok": ok });
    Ok((out, ok))
}

fn cmd_expand(a: &ExpandArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(&a.draw, f, 200);
    let trials = a.trials.or(f.trials).unwrap_or(1);
    let m_order = a.m_order.or(f.m_order).unwrap_or(3);
    let re = resolve_point("grid-re", &a.grid_re, &f.grid_re, 0.2)?;
    let im = resolve_point("grid-im", &a.grid_im, &f.grid_im, 0.3)?;
    let z = Cplx::new(re, im);
    let mut out = RunOutput::new("resolvent-expand");
    echo_draw(&mut out, &d);
    out.set("trials", trials);
    out.set("m_order", m_order);
    out.set("z_re", fmt(re));
    out.set("z_im", fmt(im));
    out.columns(&["trial", "order", "term_re", "term_im", "term_norm"]);
    let mut invalid = 0usize;
    let mut decreasing = 0usize;
    let mut small_remainder = 0usize;
    let mut remainders = Vec::new();
    for t in 0..trials as u64 {
        let mut rng = RngStream::new(d.seed, t);
        match expansion_trace(d.n, d.beta, m_order, z, &mut rng) {
            Ok(rep) => {
                for (p, term) in rep.per_order_terms.iter().enumerate() {
                    out.row(vec![
                        t.to_string(),
                        p.to_string(),
                        fmt(term.re),
                        fmt(term.im),
                        fmt(term.norm()),
                    ]);
                }
                let mags: Vec<f64> = rep.per_order_terms.iter().map(|c| c.norm()).collect();
                let tail = &mags[1..mags.len().min(4)];
                if tail.windows(2).all(|w| w[1] < w[0]) {
                    decreasing += 1;
                }
                if rep.remainder.norm() < 0.05 {
                    small_remainder += 1;
                }
                remainders.push(rep.remainder.norm());
            }
            Err(e) => {
                if let Error::InvalidParameter { .. } = e {
                    return Err(e);
                }
                invalid += 1;
            }
        }
    }
    if remainders.is_empty() {
        return Err(Error::NumericalFailure {
            message: "all expansion trials failed".into(),
            residual: invalid as f64,
        });
    }
    let done = remainders.len() as f64;
    out.summary = json!({
        "trials": trials,
        "invalid": invalid,
        "frac_decreasing": decreasing as f64 / done,
        "frac_remainder_below_005": small_remainder as f64 / done,
        "mean_remainder": remainders.iter().sum::<f64>() / done,
    });
    Ok((out, true))
}

fn cmd_asymptotics(a: &AsymptoticsArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let ks = match (&a.ks, &f.ks) {
        (Some(s), _) => parse_usize_list("ks", s)?,
        (None, Some(v)) if !v.is_empty() => v.clone(),
        _ => vec![100, 400, 1600],
    };
    let report = asymptotics_validation(&ks)?;
    let mut out = RunOutput::new("asymptotics");
    out.set("ks", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
    out.set("seed", 0);
    out.columns(&["k", "oscillatory_error", "transition_error", "transition_amplitude"]);
    for row in &report.rows {
        out.row(vec![
            row.k.to_string(),
            fmt(row.oscillatory_error),
            fmt(row.transition_error),
            fmt(row.transition_amplitude),
        ]);
    }
    let amp_target = -1.0 / 12.0;
    let ok = if report.rows.len() >= 2 {
        (-1.3..=-0.7).contains(&report.oscillatory_slope)
            && (amp_target - 0.02..=amp_target + 0.02).contains(&report.amplitude_exponent)
    } else {
        true
    };
    out.summary = json!({
        "oscillatory_slope": report.oscillatory_slope,
        "amplitude_exponent": report.amplitude_exponent,
        "slope_window": [-1.3, -0.7],
        "exponent_window": [amp_target - 0.02, amp_target + 0.02],
        "threshold_ok": ok,
    });
    Ok((out, ok))
}

fn cmd_first_row(a: &TrialArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(&a.draw, f, 50);
    let trials = a.trials.or(f.trials).unwrap_or(2000);
    let params = EnsembleParams::new(d.n, d.beta)?;
    let report = first_row_independence_test(&params, trials, d.seed)?;
    let mut out = RunOutput::new("first-row");
    echo_draw(&mut out, &d);
    out.set("trials", trials);
    out.columns(&["ks_statistic", "p_value_proxy", "correlation", "invalid"]);
    out.row(vec![
        fmt(report.ks_statistic),
        fmt(report.p_value_proxy),
        fmt(report.correlation),
        report.invalid.to_string(),
    ]);
    let ok = report.ks_statistic < 0.05;
    out.summary = json!({
        "ks_statistic": report.ks_statistic,
        "p_value_proxy": report.p_value_proxy,
        "correlation": report.correlation,
        "ks_threshold": 0.05,
        "threshold_ok": ok,
    });
    Ok((out, ok))
}

fn cmd_concentration(a: &ConcentrationArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let d = resolve_draw(&a.draw, f, 100);
    let trials = a.trials.or(f.trials).unwrap_or(400);
    let re = resolve_point("grid-re", &a.grid_re, &f.grid_re, 0.2)?;
    let im = resolve_point("grid-im", &a.grid_im, &f.grid_im, 0.2)?;
    let z = Cplx::new(re, im);
    let params = EnsembleParams::new(d.n, d.beta)?;
    let report = concentration_check(&params, z, trials, d.seed)?;
    let mut out = RunOutput::new("concentration");
    echo_draw(&mut out, &d);
    out.set("trials", trials);
    out.set("z_re", fmt(re));
    out.set("z_im", fmt(im));
    out.columns(&["lambda", "tail_prob"]);
    for &(lambda, p) in &report.tail {
        out.row(vec![fmt(lambda), fmt(p)]);
    }
    let ok = report.slope < -0.3;
    out.summary = json!({
        "sigma_hat": report.sigma_hat,
        "sigma_predicted": report.sigma_predicted,
        "slope": report.slope,
        "slope_threshold": -0.3,
        "invalid": report.invalid,
        "threshold_ok": ok,
    });
    Ok((out, ok))
}

fn cmd_partial_sum(a: &PartialSumArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let n = a.n.or(f.n).unwrap_or(400);
    let k = a.k.or(f.k).unwrap_or((n / 2).max(2));
    let l = a.l.or(f.l).unwrap_or((n / 5).max(1));
    let ratio = partial_sum_bound_check(n, k, l)?;
    let mut out = RunOutput::new("partial-sum");
    out.set("n", n);
    out.set("k", k);
    out.set("l", l);
    out.set("seed", 0);
    out.columns(&["n", "k", "l", "normalized_max"]);
    out.row(vec![n.to_string(), k.to_string(), l.to_string(), fmt(ratio)]);
    out.summary = json!({ "normalized_max": ratio });
    Ok((out, true))
}

fn cmd_special_eval(a: &SpecialEvalArgs, f: &FileConfig) -> Result<(RunOutput, bool)> {
    let k = a.k.or(f.k).unwrap_or(8);
    let axis = a.grid_re.clone().or_else(|| f.grid_re.clone()).unwrap_or("-3,3,121".into());
    let xs = parse_axis("grid-re", &axis, false)?;
    let name = match a.function {
        SpecialFn::Hermite => "hermite",
        SpecialFn::Oscillatory => "oscillatory",
        SpecialFn::Transition => "transition",
        SpecialFn::Airy => "airy",
        SpecialFn::AiryPrime => "airy-prime",
        SpecialFn::SemicircleDensity => "semicircle-density",
        SpecialFn::SemicircleCdf => "semicircle-cdf",
        SpecialFn::SemicircleQuantile => "semicircle-quantile",
    };
    let mut out = RunOutput::new("special-eval");
    out.set("fn", name);
    out.set("k", k);
    out.set("grid_re", &axis);
    out.set("seed", 0);
    out.columns(&["index", "x", "k", "value"]);
    let mut max_abs = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let v = match a.function {
            SpecialFn::Hermite => hermite_function(k, x),
            SpecialFn::Oscillatory => pr_oscillatory(k, x).unwrap_or(f64::NAN),
            SpecialFn::Transition => pr_transition(k, x).unwrap_or(f64::NAN),
            SpecialFn::Airy => airy(x),
            SpecialFn::AiryPrime => airy_prime(x),
            SpecialFn::SemicircleDensity => semicircle_density(x),
            SpecialFn::SemicircleCdf => semicircle_cdf(x),
            SpecialFn::SemicircleQuantile => semicircle_quantile(x).unwrap_or(f64::NAN),
        };
        if v.is_finite() {
            max_abs = max_abs.max(v.abs());
        }
        out.row(vec![i.to_string(), fmt(x), k.to_string(), fmt(v)]);
    }
    out.summary = json!({ "points": xs.len(), "max_abs": max_abs });
    Ok((out, true))
}
