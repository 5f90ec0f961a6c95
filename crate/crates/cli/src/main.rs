//! `symlab`: command-line runs over the symmetry-integral library.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when a verification
//! subcommand finds a value outside its tolerance.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use symlab::chi::{chi_direct, ChiExpansion};
use symlab::io::{pairs_csv, read_grid_file, read_scan_file, scan_csv, series_csv, table_csv, CHI_HEADER};
use symlab::scaling::{fit_power_law, flagship_grid, run_scan, FunctionSpec, ScanRow};
use symlab::spectral::{
    classify_near_integer_pairs, enumerate_offdiagonal_pairs, offdiagonal_pair_count, reconcile, ReconcileOptions,
    DEFAULT_MAX_PAIRS, DEFAULT_MAX_Q,
};
use symlab::symmetry::{symmetry_integral, symmetry_integral_continuous, symmetry_series};
use symlab::tables::{build_generator, convolve_with_ones, sieve_standard};
use symlab::{Error, GeneratorSpec, StandardFunction, WindowParams};

const EXPANSION_TOL_PER_Q: f64 = 1e-9;
const CLOSURE_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "symlab",
    version,
    about = "Symmetry integrals of arithmetic functions in short intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a sieved function, or f = g * 1 for a generator, on [1, M].
    Sieve(SieveArgs),
    /// Symmetry integral (JSON) or the per-x symmetry sums (CSV).
    Symmetry(SymmetryArgs),
    /// Compare the direct and Fourier evaluations of chi_q; one CSV row per q.
    ChiVerify(ChiVerifyArgs),
    /// Evaluate the integral by every route and check that they close.
    Decompose(DecomposeArgs),
    /// List off-diagonal pairs whose phase sum is within 1/A of an integer.
    LemmaScan(LemmaArgs),
    /// Measure a grid of (function, N, h, Q) cells.
    Scan(ScanArgs),
    /// Fit log(integral) against log(N h) on a scan file.
    Fit(FitArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Sieved function: d, d_<k>, Lambda, moebius, moebius_sq.
    #[arg(long)]
    function: Option<StandardFunction>,
    /// Generator g with f = g * 1: delta_one, delta_at:<q0>, ones, moebius,
    /// neg_moebius_log, divisor_k_minus_1:<k>, custom:<path>.
    #[arg(long)]
    generator: Option<GeneratorSpec>,
}

impl Source {
    fn spec(&self) -> FunctionSpec {
        match (&self.function, &self.generator) {
            (Some(f), _) => FunctionSpec::Standard(*f),
            (None, Some(g)) => FunctionSpec::Generator(g.clone()),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SieveArgs {
    #[command(flatten)]
    source: Source,
    /// Table length.
    #[arg(long = "M")]
    m: usize,
    /// Support bound for the generator (default M).
    #[arg(long = "Q")]
    q: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SymmetryArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    h: usize,
    /// Generator support bound (default N); sieved functions ignore it.
    #[arg(long = "Q")]
    q: Option<usize>,
    /// Emit the per-x series as CSV instead of the JSON summary.
    #[arg(long)]
    series: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ChiVerifyArgs {
    #[arg(long)]
    qmax: u64,
    #[arg(long)]
    h: u64,
    /// Points x are drawn from (N, 2N].
    #[arg(long = "N")]
    n: u64,
    /// Random sample size per q; every x in (N, 2N] when omitted.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Allowed error per unit of q.
    #[arg(long, default_value_t = EXPANSION_TOL_PER_Q)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    generator: GeneratorSpec,
    #[arg(long = "Q")]
    q: usize,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    h: usize,
    /// Largest Q accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_Q)]
    max_q: usize,
    /// Largest off-diagonal pair count accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_PAIRS)]
    max_pairs: u64,
    /// Near-integer threshold A (default max(N ceil(log N), 2Q + 1)).
    #[arg(long = "A")]
    a: Option<u64>,
    /// Allowed residual relative to max(1, integral).
    #[arg(long, default_value_t = CLOSURE_TOL)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct LemmaArgs {
    /// Largest denominator.
    #[arg(long = "Q", alias = "qmax")]
    q: usize,
    /// Threshold A (default 2Q + 1).
    #[arg(long = "A")]
    a: Option<u64>,
    /// Half-width used for the weight check.
    #[arg(long, default_value_t = 1)]
    h: u64,
    /// List every off-diagonal pair instead of the near-integer ones.
    #[arg(long)]
    all_pairs: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_PAIRS)]
    max_pairs: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ScanArgs {
    /// Grid CSV with header `function,N,h,Q`.
    #[arg(long, conflicts_with = "flagship", required_unless_present = "flagship")]
    grid: Option<PathBuf>,
    /// Use the built-in grid N = 2^12..2^17, h = floor(N^0.3), Q = N for this function.
    #[arg(long)]
    flagship: Option<FunctionSpec>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FitArgs {
    /// Scan CSV as written by `scan`.
    #[arg(long)]
    scan: PathBuf,
    /// Keep only rows with this function name.
    #[arg(long)]
    function: Option<String>,
    /// Optional slope window; exit 2 when the slope falls outside.
    #[arg(long)]
    min_slope: Option<f64>,
    #[arg(long)]
    max_slope: Option<f64>,
    #[arg(long)]
    min_r_squared: Option<f64>,
    #[command(flatten)]
    output: Output,
}

/// What a subcommand produced.
struct Report {
    text: String,
    /// Verification failures, if any; these turn into exit status 2.
    failures: Vec<String>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report {
            text,
            failures: Vec::new(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let (result, out) = match &cli.command {
        Command::Sieve(a) => (sieve(a), &a.output),
        Command::Symmetry(a) => (symmetry(a), &a.output),
        Command::ChiVerify(a) => (chi_verify(a), &a.output),
        Command::Decompose(a) => (decompose(a), &a.output),
        Command::LemmaScan(a) => (lemma_scan(a), &a.output),
        Command::Scan(a) => (scan(a), &a.output),
        Command::Fit(a) => (fit(a), &a.output),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&report.text, out.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("verification failed: {f}");
        }
        ExitCode::from(2)
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("SYMLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SYMLAB_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn sieve(a: &SieveArgs) -> symlab::Result<Report> {
    if a.m == 0 {
        return Err(Error::invalid("M must be >= 1"));
    }
    let table = match a.source.spec() {
        FunctionSpec::Standard(s) => sieve_standard(s, a.m)?,
        FunctionSpec::Generator(spec) => {
            let q = a.q.unwrap_or(a.m);
            if q == 0 {
                return Err(Error::invalid("Q must be >= 1"));
            }
            convolve_with_ones(&build_generator(&spec, q)?, a.m)?
        }
    };
    Ok(Report::ok(table_csv(&table)))
}

fn symmetry(a: &SymmetryArgs) -> symlab::Result<Report> {
    let params = WindowParams::new(a.n, a.h, a.q.unwrap_or(a.n))?;
    let spec = a.source.spec();
    let (f, max_g) = spec.table(&params)?;
    if a.series {
        return Ok(Report::ok(series_csv(&symmetry_series(&f, &params)?)));
    }
    let integral = symmetry_integral(&f, &params)?;
    let continuous = symmetry_integral_continuous(&f, &params)?;
    Ok(Report::ok(to_json(&json!({
        "function": spec.to_string(),
        "N": params.n(),
        "h": params.h(),
        "Q": params.q(),
        "integral": integral,
        "integral_continuous": continuous,
        "ratio": integral / (params.n() as f64 * params.h() as f64),
        "max_g": max_g,
        "theorem_regime": params.theorem_regime(),
    }))))
}

fn chi_verify(a: &ChiVerifyArgs) -> symlab::Result<Report> {
    if a.qmax == 0 || a.h == 0 || a.n == 0 {
        return Err(Error::invalid("qmax, h and N must be >= 1"));
    }
    if a.n > i64::MAX as u64 / 2 {
        return Err(Error::invalid("N too large"));
    }
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(Error::invalid("tol must be a finite non-negative number"));
    }
    if a.samples == Some(0) {
        return Err(Error::invalid("samples must be >= 1"));
    }
    let xs: Vec<i64> = match a.samples {
        None => (a.n as i64 + 1..=2 * a.n as i64).collect(),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..k).map(|_| rng.gen_range(a.n as i64 + 1..=2 * a.n as i64)).collect()
        }
    };
    // (x, direct, fourier, error) at the worst x for each q
    let worst: Vec<(i64, f64, f64, f64)> = (1..=a.qmax)
        .into_par_iter()
        .map(|q| {
            let expansion = ChiExpansion::new(q, a.h);
            let mut best = (xs[0], 0.0, 0.0, -1.0);
            for &x in &xs {
                let direct = chi_direct(q, x, a.h).to_f64();
                let fourier = expansion.eval(x);
                let err = (direct - fourier).abs();
                if err > best.3 {
                    best = (x, direct, fourier, err);
                }
            }
            best
        })
        .collect();
    let mut text = String::from(CHI_HEADER);
    text.push('\n');
    let mut failures = Vec::new();
    for (q, (x, direct, fourier, err)) in (1..=a.qmax).zip(worst) {
        text.push_str(&format!("{q},{},{x},{direct},{fourier},{err}\n", a.h));
        let allowed = a.tol * q as f64;
        if err > allowed {
            failures.push(format!("q = {q}, x = {x}: error {err:e} > {allowed:e}"));
        }
    }
    Ok(Report { text, failures })
}

fn decompose(a: &DecomposeArgs) -> symlab::Result<Report> {
    let params = WindowParams::new(a.n, a.h, a.q)?;
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(Error::invalid("tol must be a finite non-negative number"));
    }
    let g = build_generator(&a.generator, a.q)?;
    let options = ReconcileOptions {
        max_q: a.max_q,
        max_pairs: a.max_pairs,
        threshold: a.a,
    };
    let report = reconcile(&g, &params, &options)?;
    let allowed = a.tol * report.i_direct.abs().max(1.0);
    let mut failures = Vec::new();
    if report.residual.abs() > allowed {
        failures.push(format!("spectral residual {:e} > {allowed:e}", report.residual));
    }
    if (report.i_direct - report.i_via_chi).abs() > allowed {
        failures.push(format!(
            "direct {} and chi-route {} integrals differ",
            report.i_direct, report.i_via_chi
        ));
    }
    Ok(Report {
        text: to_json(&report),
        failures,
    })
}

fn lemma_scan(a: &LemmaArgs) -> symlab::Result<Report> {
    if a.q == 0 || a.h == 0 {
        return Err(Error::invalid("Q and h must be >= 1"));
    }
    if a.all_pairs {
        let count = offdiagonal_pair_count(a.q);
        if count > a.max_pairs {
            return Err(Error::BudgetExceeded {
                what: "off-diagonal pairs",
                count,
                budget: a.max_pairs,
            });
        }
        return Ok(Report::ok(pairs_csv(&enumerate_offdiagonal_pairs(a.q))));
    }
    let threshold = a.a.unwrap_or(2 * a.q as u64 + 1);
    let near = classify_near_integer_pairs(a.q, threshold, a.h)?;
    let failures = near
        .iter()
        .filter(|p| !p.weight_vanishes)
        .map(|p| {
            format!(
                "pair {}/{} + {}/{} is within 1/{threshold} of an integer with nonzero weight",
                p.pair.first.num(),
                p.pair.first.den(),
                p.pair.second.num(),
                p.pair.second.den()
            )
        })
        .collect();
    Ok(Report {
        text: pairs_csv(near.iter().map(|p| &p.pair)),
        failures,
    })
}

fn scan(a: &ScanArgs) -> symlab::Result<Report> {
    let grid = match (&a.grid, &a.flagship) {
        (Some(path), _) => read_grid_file(path)?,
        (None, Some(function)) => flagship_grid(function.clone()),
        (None, None) => unreachable!("clap requires one of grid and flagship"),
    };
    let mut rows = Vec::with_capacity(grid.len());
    for (cell, result) in grid.iter().zip(run_scan(&grid)) {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => {
                return Err(Error::invalid(format!(
                    "cell ({}, N = {}, h = {}, Q = {}): {e}",
                    cell.function, cell.n, cell.h, cell.q
                )))
            }
        }
    }
    Ok(Report::ok(scan_csv(&rows)))
}

fn fit(a: &FitArgs) -> symlab::Result<Report> {
    let rows: Vec<ScanRow> = read_scan_file(&a.scan)?
        .into_iter()
        .filter(|r| a.function.as_ref().is_none_or(|f| &r.function_name == f))
        .collect();
    let fit = fit_power_law(&rows)?;
    let mut failures = Vec::new();
    if let Some(lo) = a.min_slope.filter(|&lo| fit.slope < lo) {
        failures.push(format!("slope {} < {lo}", fit.slope));
    }
    if let Some(hi) = a.max_slope.filter(|&hi| fit.slope > hi) {
        failures.push(format!("slope {} > {hi}", fit.slope));
    }
    if let Some(r2) = a.min_r_squared.filter(|&r2| fit.r_squared < r2) {
        failures.push(format!("r^2 {} < {r2}", fit.r_squared));
    }
    Ok(Report {
        text: to_json(&fit),
        failures,
    })
}
