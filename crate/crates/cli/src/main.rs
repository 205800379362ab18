//! `qannulus`: seeded experiments on quantum annuli, hyperbolae and the
//! quantum cross.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on an
//! invalid configuration. Set `QA_LOG` (for example `QA_LOG=info`) for
//! progress output on stderr.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use qannulus::dilation::{build_any, sample_pair, verify_random_samples};
use qannulus::estimate::{bound_constant, identity_residual, known_bounds, verify_estimate, BoundSource};
use qannulus::laurent::HyperbolaFunction;
use qannulus::search::{audit, cross_witness, optimize_lower_bound, sweep, SearchConfig, DEFAULT_RESTARTS};
use qannulus::tolerances::{DEFAULT_GRID, DEFAULT_MARGIN, IDENTITY_TOL, PROPERTY_TOL};
use qannulus::{seeds, Error, Radius};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use report::{write_csv, write_json, Finding, Report};

#[derive(Parser)]
#[command(name = "qannulus", version, about = "Minidilations and spectral-constant estimates for quantum annuli")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify the minidilation of random pairs.
    VerifyDilation(VerifyDilationArgs),
    /// Check ‖f(Z,W)‖ ≤ C(r)·‖f‖ on random pairs and functions.
    CheckEstimate(CheckEstimateArgs),
    /// Print C(r) and the known envelope for K(r).
    Bound(BoundArgs),
    /// Search for a large ‖g(X)‖/‖g‖ on the annulus.
    EstimateK(SearchArgs),
    /// Run the search over several radii and tabulate best ratio against C(r).
    Sweep(SweepArgs),
    /// The nilpotent pair on the quantum cross with ratio 2(1 − eps).
    CrossDemo(CrossDemoArgs),
    /// Residual of the operator identity on dilated pairs.
    IdentityCheck(IdentityArgs),
}

#[derive(Args, Serialize)]
struct Outputs {
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write a CSV table here.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyDilationArgs {
    /// Radius, a number above 1 or `inf`.
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = PROPERTY_TOL)]
    tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    out: Outputs,
}

#[derive(Args, Serialize)]
struct CheckEstimateArgs {
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Largest dimension; each trial draws one in 1..=dim.
    #[arg(long, default_value_t = 6)]
    dim: usize,
    /// Largest degree of f⁺ and f⁻.
    #[arg(long, default_value_t = 12)]
    deg: usize,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long, default_value_t = 2718)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: Outputs,
}

#[derive(Args, Serialize)]
struct BoundArgs {
    #[arg(long)]
    r: String,
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
struct SearchParams {
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 10)]
    deg: usize,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: f64,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    r: String,
    #[command(flatten)]
    #[serde(flatten)]
    params: SearchParams,
    /// Write the best witness (operator, function, ratios) as JSON.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    /// Comma-separated radii, each above 1.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "1.5,2,3,5,10")]
    r: Vec<String>,
    #[command(flatten)]
    #[serde(flatten)]
    params: SearchParams,
    /// CSV table path; same as --csv.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    outputs: Outputs,
}

#[derive(Args, Serialize)]
struct CrossDemoArgs {
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct IdentityArgs {
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Largest dimension; each trial draws one in 1..=dim.
    #[arg(long, default_value_t = 6)]
    dim: usize,
    #[arg(long, default_value_t = 12)]
    deg: usize,
    #[arg(long, default_value_t = 31)]
    seed: u64,
    #[arg(long, default_value_t = IDENTITY_TOL)]
    tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    out: Outputs,
}

/// Invalid configuration, reported with exit status 2.
struct ConfigError(String);

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => ConfigError(m),
            other => ConfigError(other.to_string()),
        }
    }
}

enum Failure {
    Config(ConfigError),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("writing output: {e}"))
    }
}

struct Run {
    command: &'static str,
    config: Value,
    results: Value,
    findings: Vec<Finding>,
    seed: Option<u64>,
}

fn parse_r(s: &str) -> Result<Radius, ConfigError> {
    s.parse().map_err(ConfigError::from)
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(ConfigError(msg.into()))
    }
}

fn config_with_r<T: Serialize>(args: &T, r: Value) -> Value {
    let mut v = serde_json::to_value(args).expect("config serializes");
    v["r"] = r;
    v
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("results serialize")
}

fn verify_dilation_cmd(a: &VerifyDilationArgs) -> Result<Run, Failure> {
    let r = parse_r(&a.r)?;
    check(a.dim >= 1, "dim must be at least 1")?;
    check(a.trials >= 1, "trials must be at least 1")?;
    check(a.tol > 0.0, "tol must be positive")?;
    if r.is_infinite() {
        check(a.dim >= 2, "the quantum cross samplers need dim ≥ 2")?;
    }
    info!("verify-dilation: r={r} dim={} trials={}", a.dim, a.trials);
    let trials = verify_random_samples(r, &[a.dim], a.trials, a.seed, a.tol).map_err(|e| match e {
        Error::InvalidInput(_) | Error::Unsupported(_) => Failure::Config(e.into()),
        other => Failure::Runtime(other.to_string()),
    })?;

    let mut worst = [0.0f64; 5];
    let (mut worst_forward, mut worst_backward, mut worst_matched) = (0.0f64, 0.0f64, 0.0f64);
    let mut findings = Vec::new();
    let mut rows = Vec::new();
    for t in &trials {
        for (slot, (_, v)) in worst.iter_mut().zip(t.report.items()) {
            *slot = slot.max(v);
        }
        worst_forward = worst_forward.max(t.report.item3_forward);
        worst_backward = worst_backward.max(t.report.item3_backward);
        worst_matched = worst_matched.max(t.report.item3_matched);
        for f in &t.report.failures {
            findings.push(Finding {
                kind: "dilation_property".into(),
                detail: format!("trial {} (seed {}): {f}", t.index, t.seed),
                value: t.report.items().iter().map(|&(_, v)| v).fold(0.0, f64::max),
                limit: a.tol,
            });
        }
        debug!("trial {} passed={}", t.index, t.report.passed);
        rows.push(TrialRow {
            index: t.index,
            seed: t.seed,
            dim: t.dim,
            item1: t.report.item1,
            item2: t.report.item2,
            item3: t.report.item3,
            item4: t.report.item4,
            item5: t.report.item5,
            passed: t.report.passed,
        });
    }
    let passed = trials.iter().filter(|t| t.report.passed).count();
    println!("verify-dilation r={r} dim={} trials={} passed={passed}", a.dim, a.trials);
    for (i, w) in worst.iter().enumerate() {
        println!("  item {} worst residual {w:.3e}", i + 1);
    }
    if let Some(path) = &a.out.csv {
        write_csv(path, &rows)?;
    }
    Ok(Run {
        command: "verify-dilation",
        config: config_with_r(a, to_value(&r)),
        results: json!({
            "trials": a.trials,
            "passed": passed,
            "worst": {
                "item1": worst[0], "item2": worst[1], "item3": worst[2],
                "item3_forward": worst_forward, "item3_backward": worst_backward, "item3_matched": worst_matched, "item4": worst[3], "item5": worst[4],
            },
            "samples": trials,
        }),
        findings,
        seed: Some(a.seed),
    })
}

#[derive(Serialize)]
struct TrialRow {
    index: u64,
    seed: u64,
    dim: usize,
    item1: f64,
    item2: f64,
    item3: f64,
    item4: f64,
    item5: f64,
    passed: bool,
}

fn check_estimate_cmd(a: &CheckEstimateArgs) -> Result<Run, Failure> {
    let r = parse_r(&a.r)?;
    info!("check-estimate: r={r} trials={}", a.trials);
    let rep = verify_estimate(r, a.dim, a.deg, a.trials, a.seed, a.grid).map_err(|e| match e {
        Error::InvalidInput(_) | Error::Unsupported(_) => Failure::Config(e.into()),
        other => Failure::Runtime(other.to_string()),
    })?;
    let findings: Vec<Finding> = rep.violations.iter().map(Finding::from).collect();
    println!(
        "check-estimate r={r} trials={} max_ratio={:.6} C_r={:.6} max_allowed={:.6} max_identity_residual={:.3e} violations={}",
        rep.trials,
        rep.max_ratio,
        rep.c_r,
        rep.max_allowed,
        rep.max_identity_residual,
        rep.violations.len()
    );
    if let Some(path) = &a.out.csv {
        write_csv(path, &rep.violations)?;
    }
    Ok(Run {
        command: "check-estimate",
        config: config_with_r(a, to_value(&r)),
        results: to_value(&rep),
        findings,
        seed: Some(a.seed),
    })
}

fn bound_cmd(a: &BoundArgs) -> Result<Run, Failure> {
    let r = parse_r(&a.r)?;
    let kb = known_bounds(r);
    let cited = |s: BoundSource| if s == BoundSource::Cited { " (cited)" } else { "" };
    if r.is_infinite() {
        println!("2");
        println!("C(r)=2, envelope lower=2, envelope upper=2: K(inf) = 2");
    } else {
        println!("C(r)={:.6}, envelope upper={:.6}{}", kb.c_r, kb.upper, cited(kb.upper_source));
        println!("envelope lower={:.6}{}", kb.lower, cited(kb.lower_source));
        let side = if r.as_f64() > kb.crossover { "above" } else { "at or below" };
        println!("crossover r*={:.6}; r is {side} it", kb.crossover);
    }
    Ok(Run {
        command: "bound",
        config: config_with_r(a, to_value(&r)),
        results: to_value(&kb),
        findings: Vec::new(),
        seed: None,
    })
}

fn search_config(r: f64, p: &SearchParams) -> SearchConfig {
    SearchConfig {
        restarts: p.restarts,
        grid: p.grid,
        margin: p.margin,
        ..SearchConfig::new(r, p.dim, p.deg, p.budget, p.seed)
    }
}

fn finite_r(s: &str) -> Result<f64, ConfigError> {
    match parse_r(s)? {
        Radius::Finite(r) => Ok(r),
        Radius::Infinite => {
            Err(ConfigError("the search runs on the annulus model, which has no r = inf; use cross-demo".into()))
        }
    }
}

fn estimate_k_cmd(a: &SearchArgs) -> Result<Run, Failure> {
    let r = finite_r(&a.r)?;
    let cfg = search_config(r, &a.params);
    cfg.validate().map_err(ConfigError::from)?;
    info!("estimate-k: r={r} dim={} deg={} budget={}", cfg.dim, cfg.deg, cfg.budget);
    let o = optimize_lower_bound(&cfg).map_err(|e| Failure::Runtime(e.to_string()))?;
    let kb = known_bounds(Radius::Finite(r));
    println!(
        "estimate-k r={r} best_ratio={:.6} certified_ratio={:.6} C_r={:.6} envelope=[{:.6}, {:.6}] restart={} evaluations={}",
        o.best.ratio, o.best.certified_ratio, kb.c_r, kb.lower, kb.upper, o.best.restart, o.evaluations
    );
    if let Some(path) = &a.out {
        let mut bytes = serde_json::to_vec_pretty(&o.best).expect("witness serializes");
        bytes.push(b'\n');
        report::write_atomic(path, &bytes)?;
    }
    Ok(Run {
        command: "estimate-k",
        config: config_with_r(a, json!(r)),
        results: json!({ "known_bounds": kb, "outcome": o }),
        findings: o.findings.iter().cloned().map(Finding::from).collect(),
        seed: Some(cfg.seed),
    })
}

fn sweep_cmd(a: &SweepArgs) -> Result<Run, Failure> {
    let radii = a.r.iter().map(|s| finite_r(s)).collect::<Result<Vec<_>, _>>()?;
    let base = search_config(radii[0], &a.params);
    for &r in &radii {
        SearchConfig { r, ..base.clone() }.validate().map_err(ConfigError::from)?;
    }
    info!("sweep over {} radii", radii.len());
    let out = sweep(&radii, &base).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("r,C_r,best_ratio,gap");
    for row in &out.rows {
        println!("{},{:.6},{:.6},{:.6}", row.r, row.c_r, row.best_ratio, row.gap);
    }
    for path in [&a.out, &a.outputs.csv].into_iter().flatten() {
        write_csv(path, &out.rows)?;
    }
    Ok(Run {
        command: "sweep",
        config: config_with_r(a, json!(radii)),
        results: json!({
            "rows": out.rows,
            "witnesses": out.witnesses,
            "note": "best_ratio is a lower bound for K(r) at each r; the table is evidence about the shape of K, not a proof",
        }),
        findings: out.findings.into_iter().map(Finding::from).collect(),
        seed: Some(a.params.seed),
    })
}

fn cross_demo_cmd(a: &CrossDemoArgs) -> Result<Run, Failure> {
    let w = cross_witness(a.eps).map_err(ConfigError::from)?;
    let findings = audit(&w).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("ratio={:.6}", w.ratio);
    println!("Z = W = (1 − eps)·[[0, 1], [0, 0]], f = z + w, eps={}: ‖f(Z,W)‖/‖f‖ = 2(1 − eps)", a.eps);
    Ok(Run {
        command: "cross-demo",
        config: to_value(a),
        results: json!({ "ratio": w.ratio, "expected": 2.0 * (1.0 - a.eps), "witness": w }),
        findings: findings.into_iter().map(Finding::from).collect(),
        seed: None,
    })
}

#[derive(Serialize)]
struct IdentityRow {
    index: u64,
    seed: u64,
    dim: usize,
    deg_plus: usize,
    deg_minus: usize,
    residual: f64,
}

fn identity_check_cmd(a: &IdentityArgs) -> Result<Run, Failure> {
    let r = parse_r(&a.r)?;
    check(a.trials >= 1, "trials must be at least 1")?;
    let min_dim = if r.is_infinite() { 2 } else { 1 };
    check(a.dim >= min_dim, format!("dim must be at least {min_dim}"))?;
    info!("identity-check: r={r} trials={}", a.trials);
    let rows = seeds::map_indices(a.trials, |i| {
        let index = i as u64;
        let mut rng = seeds::trial_rng(a.seed, index);
        let dim = rng.random_range(min_dim..=a.dim);
        let pair = sample_pair(r, dim, index, &mut rng)?;
        let d = build_any(&pair)?;
        let (dp, dm) = (rng.random_range(0..=a.deg), rng.random_range(0..=a.deg));
        let hf = HyperbolaFunction::random(dp, dm, &mut rng);
        Ok(IdentityRow {
            index,
            seed: seeds::trial_seed(a.seed, index),
            dim,
            deg_plus: dp,
            deg_minus: dm,
            residual: identity_residual(&hf, &d),
        })
    })
    .into_iter()
    .collect::<qannulus::Result<Vec<_>>>()
    .map_err(|e| Failure::Runtime(e.to_string()))?;
    let max = rows.iter().map(|row| row.residual).fold(0.0, f64::max);
    let findings: Vec<Finding> = rows
        .iter()
        .filter(|row| row.residual.is_nan() || row.residual > a.tol)
        .map(|row| Finding {
            kind: "identity_residual".into(),
            detail: format!("trial {} (seed {})", row.index, row.seed),
            value: row.residual,
            limit: a.tol,
        })
        .collect();
    println!("identity-check r={r} trials={} max_residual={max:.3e} tol={:e}", a.trials, a.tol);
    if let Some(path) = &a.out.csv {
        write_csv(path, &rows)?;
    }
    Ok(Run {
        command: "identity-check",
        config: config_with_r(a, to_value(&r)),
        results: json!({ "trials": a.trials, "max_residual": max, "C_r": bound_constant(r), "samples": rows }),
        findings,
        seed: Some(a.seed),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QA_LOG", "warn")).init();
    let cli = Cli::parse();
    let start = Instant::now();
    let (outcome, json_path) = match &cli.command {
        Command::VerifyDilation(a) => (verify_dilation_cmd(a), a.out.json.as_ref()),
        Command::CheckEstimate(a) => (check_estimate_cmd(a), a.out.json.as_ref()),
        Command::Bound(a) => (bound_cmd(a), a.json.as_ref()),
        Command::EstimateK(a) => (estimate_k_cmd(a), a.json.as_ref()),
        Command::Sweep(a) => (sweep_cmd(a), a.outputs.json.as_ref()),
        Command::CrossDemo(a) => (cross_demo_cmd(a), a.json.as_ref()),
        Command::IdentityCheck(a) => (identity_check_cmd(a), a.out.json.as_ref()),
    };
    let run = match outcome {
        Ok(run) => run,
        Err(Failure::Config(ConfigError(msg))) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let failed = !run.findings.is_empty();
    for f in &run.findings {
        eprintln!("finding: {}", serde_json::to_string(f).unwrap_or_else(|_| format!("{} {}", f.kind, f.detail)));
    }
    if let Some(path) = json_path {
        let report = Report {
            command: run.command,
            config: run.config,
            results: run.results,
            findings: run.findings,
            seed: run.seed,
            version: env!("CARGO_PKG_VERSION"),
            elapsed_ms: start.elapsed().as_millis() as u64,
        };
        if let Err(e) = write_json(path, &report) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
