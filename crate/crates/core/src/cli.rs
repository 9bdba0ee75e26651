//! Command-line front end.
//!
//! Exit codes: 0 success, 1 check failed (verification, saturation without
//! goal), 2 bad arguments or q outside the covered regime, 3 a derivation
//! step failed, 4 unreadable certificate or I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::exactq::{classify_regime, Rational, SeedIndex};
use crate::prover::{
    replay_paper_proof, saturate, verify_certificate, Budget, Certificate, ProverError,
    ReplayOptions, SaturationStatus, Seed, Verdict,
};
use crate::spectral::{
    assemble_matrix, lemma2_check, min_residual_search, power_iteration, remark2_check, Grid,
    SpectralError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STEP: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

pub const SWEEP_HEADER: [&str; 5] = ["q", "regime", "result", "detail", "millis"];

#[derive(Debug, Parser)]
#[command(
    name = "schilling",
    version,
    about = "Zero-set prover and operator probes for f(qx) = (1/4q)[f(x-1) + f(x+1) + 2f(x)]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replay the hand derivation for one q and write its certificate.
    Certify(CertifyArgs),
    /// Run the rules to a fixpoint for one q.
    Saturate(SaturateArgs),
    /// Re-check a certificate file.
    Verify { path: PathBuf },
    /// Run certify or spectral over evenly spaced rational q.
    #[command(
        long_about = "Run certify or spectral over evenly spaced rational q.\n\n\
        Output CSV columns:\n  \
        q       exact sample, num/den\n  \
        regime  CASE_I, CASE_II, ABOVE_THRESHOLD or INVALID\n  \
        result  certify: TRIVIAL_ONLY, REGIME_ERROR, STEP_FAILURE, UNVERIFIED\n          \
        spectral: CONVERGED or NOT_CONVERGED (power iteration)\n  \
        detail  certify: step count, regime or failing step\n          \
        spectral: lambda and best residual r*\n  \
        millis  wall time of the row"
    )]
    Sweep(SweepArgs),
    /// Power iteration and residual search on the discretized operator.
    Spectral(SpectralArgs),
    /// Print the three threshold constants.
    Constants,
}

fn parse_q(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_seed_n(s: &str) -> Result<SeedIndex, String> {
    s.parse::<SeedIndex>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct SeedArgs {
    /// Seed index n (a natural number or `inf`).
    #[arg(long = "seed-n", default_value = "0", value_parser = parse_seed_n)]
    seed_n: SeedIndex,
    /// Seed sign.
    #[arg(long = "seed-eps", default_value_t = 1, allow_negative_numbers = true)]
    seed_eps: i8,
}

impl SeedArgs {
    fn seed(&self) -> Seed {
        Seed {
            n: self.seed_n,
            epsilon: self.seed_eps,
        }
    }
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// q as num/den.
    #[arg(long, value_parser = parse_q)]
    q: Rational,
    #[command(flatten)]
    seed: SeedArgs,
    /// Run the script above the threshold to show where it breaks.
    #[arg(long = "override-regime")]
    override_regime: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SaturateArgs {
    #[arg(long, value_parser = parse_q)]
    q: Rational,
    #[command(flatten)]
    seed: SeedArgs,
    #[arg(long, default_value_t = Budget::default().max_passes)]
    passes: usize,
    #[arg(long = "max-intervals", default_value_t = Budget::default().max_intervals)]
    max_intervals: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    Certify,
    Spectral,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_q)]
    qmin: Rational,
    #[arg(long, value_parser = parse_q)]
    qmax: Rational,
    /// Number of samples, endpoints included.
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = SweepMode::Certify)]
    mode: SweepMode,
    #[arg(long, default_value_t = 256)]
    grid: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long = "rand-seed", default_value_t = 0)]
    rand_seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectralArgs {
    #[arg(long, value_parser = parse_q)]
    q: Rational,
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Residual-search iterations.
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long = "rand-seed", default_value_t = 0)]
    rand_seed: u64,
    /// Power-iteration tolerance on successive eigenvalue estimates.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long = "power-iters", default_value_t = 10_000)]
    power_iters: usize,
    /// Writes the best residual candidate as `x,value` CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Certify(a) => certify(a, out, err),
        Command::Saturate(a) => saturate_cmd(a, out, err),
        Command::Verify { path } => verify_cmd(&path, out, err),
        Command::Sweep(a) => sweep(a, out, err),
        Command::Spectral(a) => spectral(a, out, err),
        Command::Constants => constants(out),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_INPUT
    })
}

fn write_output(path: &Path, contents: &str) -> std::io::Result<()> {
    fs::write(path, contents)
}

fn prover_exit(e: &ProverError, err: &mut dyn Write) -> std::io::Result<i32> {
    match e {
        ProverError::StepFailure { index, reason } => {
            writeln!(err, "step failure at step {index}: {reason}")?;
            Ok(EXIT_STEP)
        }
        ProverError::GoalNotReached => {
            writeln!(err, "{e}")?;
            Ok(EXIT_STEP)
        }
        _ => {
            writeln!(err, "{e}")?;
            Ok(EXIT_USAGE)
        }
    }
}

fn certify(a: CertifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let regime = classify_regime(&a.q);
    writeln!(out, "q = {}", a.q)?;
    writeln!(out, "regime: {}", regime.tag)?;
    let cert = match replay_paper_proof(
        &a.q,
        a.seed.seed(),
        ReplayOptions {
            override_regime: a.override_regime,
        },
    ) {
        Ok(c) => c,
        Err(e) => return prover_exit(&e, err),
    };
    writeln!(out, "steps: {}", cert.step_count())?;
    writeln!(out, "verdict: {}", cert.verdict)?;
    if let Some(path) = &a.out {
        write_output(path, &cert.to_json())?;
    }
    let check = verify_certificate(&cert);
    writeln!(out, "verified: {}", if check.ok { "yes" } else { "no" })?;
    Ok(if check.ok && cert.verdict == Verdict::TrivialOnly {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn saturate_cmd(a: SaturateArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let budget = Budget::new(a.passes, a.max_intervals);
    writeln!(out, "q = {}", a.q)?;
    writeln!(out, "regime: {}", classify_regime(&a.q).tag)?;
    let outcome = match saturate(&a.q, a.seed.seed(), budget) {
        Ok(o) => o,
        Err(e) => return prover_exit(&e, err),
    };
    writeln!(out, "status: {}", outcome.status)?;
    writeln!(out, "passes: {}", outcome.passes)?;
    match outcome.goal_pass {
        Some(p) => writeln!(out, "goal reached after pass: {p}")?,
        None => writeln!(out, "goal reached after pass: none")?,
    }
    writeln!(out, "pieces: {}", outcome.set.piece_count())?;
    writeln!(out, "steps: {}", outcome.certificate.step_count())?;
    writeln!(out, "verdict: {}", outcome.certificate.verdict)?;
    if let Some(path) = &a.out {
        write_output(path, &outcome.certificate.to_json())?;
    }
    let check = verify_certificate(&outcome.certificate);
    writeln!(out, "verified: {}", if check.ok { "yes" } else { "no" })?;
    Ok(if check.ok && outcome.status == SaturationStatus::Goal {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn verify_cmd(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "cannot read {}: {e}", path.display())?;
            return Ok(EXIT_INPUT);
        }
    };
    if text.trim().is_empty() {
        writeln!(err, "{} is empty", path.display())?;
        return Ok(EXIT_INPUT);
    }
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "cannot parse {}: {e}", path.display())?;
            return Ok(EXIT_INPUT);
        }
    };
    let check = verify_certificate(&cert);
    match &check.failure {
        None => {
            writeln!(
                out,
                "ok: q = {}, {} steps, verdict {}",
                cert.q,
                cert.step_count(),
                cert.verdict
            )?;
            Ok(EXIT_OK)
        }
        Some((Some(i), why)) => {
            writeln!(out, "verification failed at step {i}: {why}")?;
            Ok(EXIT_FAILED)
        }
        Some((None, why)) => {
            writeln!(out, "verification failed: {why}")?;
            Ok(EXIT_FAILED)
        }
    }
}

/// `steps` evenly spaced exact samples of `[qmin, qmax]`, endpoints included.
pub fn sweep_samples(qmin: &Rational, qmax: &Rational, steps: usize) -> Vec<Rational> {
    if steps == 1 {
        return vec![qmin.clone()];
    }
    let width = qmax - qmin;
    let last = Rational::from_integer((steps - 1) as i64);
    (0..steps)
        .map(|k| qmin + &(&width * &Rational::from_integer(k as i64) / &last))
        .collect()
}

/// One sweep row; fields in `SWEEP_HEADER` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub q: Rational,
    pub regime: String,
    pub result: String,
    pub detail: String,
    pub millis: u128,
}

fn certify_row(q: &Rational) -> SweepRow {
    let start = Instant::now();
    let regime = classify_regime(q).tag.to_string();
    let (result, detail) = match replay_paper_proof(q, Seed::default(), ReplayOptions::default()) {
        Ok(cert) => {
            let result = if verify_certificate(&cert).ok {
                cert.verdict.to_string()
            } else {
                "UNVERIFIED".into()
            };
            (result, format!("steps={}", cert.step_count()))
        }
        Err(ProverError::Regime(tag)) => ("REGIME_ERROR".into(), tag.to_string()),
        Err(ProverError::StepFailure { index, reason }) => {
            ("STEP_FAILURE".into(), format!("step={index}: {reason}"))
        }
        Err(e) => ("ERROR".into(), e.to_string()),
    };
    SweepRow {
        q: q.clone(),
        regime,
        result,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn spectral_row(q: &Rational, grid: usize, iters: usize, seed: u64) -> SweepRow {
    let start = Instant::now();
    let regime = classify_regime(q).tag.to_string();
    let (result, detail) = match Grid::new(q.to_f64(), grid) {
        Ok(g) => {
            let p = power_iteration(&assemble_matrix(&g), 1e-10, 10_000, seed);
            let s = min_residual_search(&g, iters, seed);
            let result = if p.converged {
                "CONVERGED"
            } else {
                "NOT_CONVERGED"
            };
            (
                result.to_string(),
                format!("lambda={:.12};r={:.6e}", p.lambda, s.r),
            )
        }
        Err(e) => ("ERROR".into(), e.to_string()),
    };
    SweepRow {
        q: q.clone(),
        regime,
        result,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let zero = Rational::zero();
    let one = Rational::one();
    if !(zero < a.qmin && a.qmin < a.qmax && a.qmax < one) || a.steps == 0 {
        writeln!(err, "need 0 < qmin < qmax < 1 and steps >= 1")?;
        return Ok(EXIT_USAGE);
    }
    if a.mode == SweepMode::Spectral && (a.grid < 3 || a.iters == 0) {
        writeln!(err, "need --grid >= 3 and --iters >= 1")?;
        return Ok(EXIT_USAGE);
    }
    let samples = sweep_samples(&a.qmin, &a.qmax, a.steps);
    let mut rows: Vec<SweepRow> = samples
        .par_iter()
        .map(|q| match a.mode {
            SweepMode::Certify => certify_row(q),
            SweepMode::Spectral => spectral_row(q, a.grid, a.iters, a.rand_seed),
        })
        .collect();
    rows.sort_by(|x, y| x.q.cmp(&y.q));

    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(SWEEP_HEADER)?;
        for r in &rows {
            w.write_record([
                r.q.to_string(),
                r.regime.clone(),
                r.result.clone(),
                r.detail.clone(),
                r.millis.to_string(),
            ])?;
        }
        w.flush()?;
    }
    match &a.out {
        Some(path) => {
            fs::write(path, &buf)?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => out.write_all(&buf)?,
    }
    Ok(EXIT_OK)
}

fn spectral(a: SpectralArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    if a.iters == 0 || a.tol.is_nan() || a.tol <= 0.0 {
        writeln!(err, "need --iters >= 1 and --tol > 0")?;
        return Ok(EXIT_USAGE);
    }
    let q = a.q.to_f64();
    let grid = match Grid::new(q, a.grid) {
        Ok(g) => g,
        Err(e) => {
            writeln!(err, "{e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let matrix = assemble_matrix(&grid);
    let power = power_iteration(&matrix, a.tol, a.power_iters, a.rand_seed);
    let search = min_residual_search(&grid, a.iters, a.rand_seed);
    writeln!(out, "q = {} ({q})", a.q)?;
    writeln!(out, "regime: {}", classify_regime(&a.q).tag)?;
    writeln!(
        out,
        "grid: {} points on [-{Q}, {Q}], h = {}",
        grid.len(),
        grid.spacing(),
        Q = grid.big_q()
    )?;
    writeln!(out, "nonzeros: {}", matrix.nnz())?;
    writeln!(
        out,
        "power iteration: lambda = {:.12}, iterations = {}, converged = {}",
        power.lambda, power.iterations, power.converged
    )?;
    let dev = remark2_check(&power.v);
    writeln!(
        out,
        "  f(0) deviation {:.3e}, f(Q) deviation {:.3e}",
        dev.dev0, dev.dev_q
    )?;
    writeln!(
        out,
        "residual search: r* = {:.6e} after {} iterations (seed {})",
        search.r, a.iters, a.rand_seed
    )?;
    let dev = remark2_check(&search.f);
    writeln!(
        out,
        "  f(0) deviation {:.3e}, f(Q) deviation {:.3e}",
        dev.dev0, dev.dev_q
    )?;
    for (m, n) in [(1, 0), (1, 1), (2, 1)] {
        match lemma2_check(&search.f, m, n, 1, 200) {
            Ok(d) => writeln!(out, "  scaling identity m={m} n={n}: max deviation {d:.3e}")?,
            Err(SpectralError::EmptyWindow) => {
                writeln!(out, "  scaling identity: window (Q-1, 1-Q) empty")?;
                break;
            }
            Err(e) => writeln!(out, "  scaling identity m={m} n={n}: {e}")?,
        }
    }
    if let Some(path) = &a.out {
        let file = fs::File::create(path)?;
        if let Err(e) = search.f.write_csv(file) {
            writeln!(err, "{e}")?;
            return Ok(EXIT_INPUT);
        }
    }
    Ok(EXIT_OK)
}

/// Root of the polynomial with coefficients `coeffs` (constant first) in
/// `[lo, hi]` by bisection. Requires a sign change on the bracket.
pub fn bisect_root(coeffs: &[f64], mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let mut p_lo = p(lo);
    assert!(p_lo * p(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let p_mid = p(mid);
        if p_mid == 0.0 {
            return mid;
        }
        if (p_mid < 0.0) == (p_lo < 0.0) {
            lo = mid;
            p_lo = p_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(label, polynomial, closed form, coefficients)` of the three thresholds.
pub const THRESHOLDS: [(&str, &str, &str, [f64; 4]); 3] = [
    (
        "case split",
        "q^2 - 3q + 1",
        "(3 - sqrt 5)/2",
        [1.0, -3.0, 1.0, 0.0],
    ),
    (
        "Baron bound",
        "q^2 + 2q - 1",
        "sqrt 2 - 1",
        [-1.0, 2.0, 1.0, 0.0],
    ),
    (
        "main threshold",
        "3q^3 - 3q^2 + 3q - 1",
        "(1 - 2^(1/3) + 4^(1/3))/3",
        [-1.0, 3.0, -3.0, 3.0],
    ),
];

fn constants(out: &mut dyn Write) -> std::io::Result<i32> {
    for (label, poly, closed, coeffs) in THRESHOLDS {
        let root = bisect_root(&coeffs, 0.0, 1.0, 1e-9);
        writeln!(out, "{label}: root of {poly} in (0, 1) = {closed}")?;
        writeln!(out, "  {root:.10} (approximation, bisection to 1e-9)")?;
    }
    Ok(EXIT_OK)
}
