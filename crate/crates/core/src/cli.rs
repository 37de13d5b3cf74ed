//! `ttz` command-line front end.
//!
//! Exit codes: 0 ok, 2 invalid matrix, 3 order below threshold, 4 I/O or
//! shape error, 5 verification failure, 1 anything else.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::inverse::CompressedInverse;
use crate::io::{self, Format};
use crate::matrix::ToeplitzTridiagonal;
use crate::profile::{band_profile, error_bound};
use crate::reference::{exact_inverse_dense, thomas_solve};
use crate::solver::{self, stream_drift, Method, SolveOptions};
use crate::spectral::spectral_params;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID_MATRIX: i32 = 2;
pub const EXIT_BELOW_THRESHOLD: i32 = 3;
pub const EXIT_IO_SHAPE: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// `phi` below this gets a slow-decay warning from `profile`.
const SLOW_DECAY_PHI: f64 = 0.05;
const HUGE_N_DELTA: usize = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "ttz", version, about = "Working-precision inverses and solvers for tridiagonal Toeplitz matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print spectral parameters and band constants.
    Profile(ProfileArgs),
    /// Build the compressed inverse and export its band payload.
    Invert(InvertArgs),
    /// Solve T x = rhs.
    Solve(SolveArgs),
    /// Check the approximation against the exact oracles.
    Verify(VerifyArgs),
    /// Time solvers and report CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    /// Diagonal value.
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    /// Off-diagonal value.
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    /// Precision parameter: values below 2^-delta count as zero.
    #[arg(long, default_value_t = crate::DEFAULT_DELTA)]
    pub delta: u32,
}

#[derive(Debug, Clone, Args)]
pub struct StreamArgs {
    #[arg(long, default_value_t = 1)]
    pub chunks: usize,
    #[arg(long, default_value_t = 4096)]
    pub reseed_interval: usize,
    #[arg(long)]
    pub omit_left_correction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Binary,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Binary => Format::Binary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Streaming,
    Banded,
    Thomas,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Streaming => Method::Streaming,
            MethodArg::Banded => Method::Banded,
            MethodArg::Thomas => Method::Thomas,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchMethod {
    Streaming,
    Banded,
    Thomas,
    /// Construction of the compressed inverse.
    Invert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Entry,
    Solve,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Matrix order, only used for the N_delta warning.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct InvertArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Binary)]
    pub format: FormatArg,
    /// Below N_delta, write the exact dense inverse (row-major vector) instead of failing.
    #[arg(long)]
    pub allow_exact_fallback: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Expected order; defaults to the length of the rhs file.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Streaming)]
    pub method: MethodArg,
    #[command(flatten)]
    pub stream: StreamArgs,
    #[arg(long)]
    pub rhs: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = VerifyMode::Entry)]
    pub mode: VerifyMode,
    #[command(flatten)]
    pub stream: StreamArgs,
    /// Relative sup-norm tolerance for solve mode.
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    /// Seed of the random right-hand side in solve mode.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "streaming")]
    pub method: Vec<BenchMethod>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[command(flatten)]
    pub stream: StreamArgs,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::DegenerateOffDiagonal
        | Error::NotDiagonallyDominant { .. }
        | Error::NonFinite { .. }
        | Error::InvalidOrder
        | Error::InvalidDelta => EXIT_INVALID_MATRIX,
        Error::OrderBelowThreshold { .. } | Error::OrderTooSmall { .. } => EXIT_BELOW_THRESHOLD,
        Error::LengthMismatch { .. }
        | Error::OrderTooLargeForDense { .. }
        | Error::Format(_)
        | Error::Io(_) => EXIT_IO_SHAPE,
        _ => EXIT_INTERNAL,
    }
}

/// Uniform `[-1, 1)` right-hand side from a fixed seed.
pub fn random_rhs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `||x - y||_inf / ||y||_inf`.
pub fn rel_sup_diff(x: &[f64], y: &[f64]) -> f64 {
    let num = x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let den = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Runs a parsed command, writing reports to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Profile(args) => cmd_profile(args, out, err),
        Command::Invert(args) => cmd_invert(args, out, err),
        Command::Solve(args) => cmd_solve(args, out, err),
        Command::Verify(args) => cmd_verify(args, out, err),
        Command::Bench(args) => cmd_bench(args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

type CmdResult = Result<i32, Error>;

pub fn cmd_profile(args: &ProfileArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let m = &args.matrix;
    let p = spectral_params(m.a, m.b)?;
    let prof = band_profile(&p, m.delta)?;
    let bound = error_bound(&p, prof.k_delta)?;
    writeln!(out, "x={}", p.x)?;
    writeln!(out, "r_plus={}", p.r_plus)?;
    writeln!(out, "r_minus={}", p.r_minus)?;
    writeln!(out, "rho={}", p.rho)?;
    writeln!(out, "phi={}", p.phi)?;
    writeln!(out, "tau={}", p.tau)?;
    writeln!(out, "k_delta={}", prof.k_delta)?;
    writeln!(out, "N_delta={}", prof.n_delta)?;
    writeln!(out, "alpha_delta={}", prof.alpha_delta)?;
    writeln!(out, "bandwidth={}", prof.bandwidth)?;
    writeln!(out, "corrections={}", prof.corrections)?;
    writeln!(out, "error_bound={bound:e}")?;
    if let Some(n) = args.n {
        if prof.n_delta > n {
            writeln!(err, "warning: N_delta={} exceeds n={n}; the banded inverse is not guaranteed", prof.n_delta)?;
        }
    }
    if prof.n_delta > HUGE_N_DELTA {
        writeln!(err, "warning: N_delta={} is very large", prof.n_delta)?;
    }
    if p.phi < SLOW_DECAY_PHI {
        writeln!(
            err,
            "warning: phi={} is close to 0 (|a| barely exceeds 2|b|); N_delta={} and bandwidth={}",
            p.phi, prof.n_delta, prof.bandwidth
        )?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_invert(args: &InvertArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let m = &args.matrix;
    let t = ToeplitzTridiagonal::new(m.a, m.b, args.n)?;
    let inv = match CompressedInverse::build(&t, m.delta) {
        Ok(inv) => inv,
        Err(Error::OrderBelowThreshold { n, n_delta }) if args.allow_exact_fallback => {
            let dense = exact_inverse_dense(&t)?;
            if let Some(path) = &args.out {
                io::write_vector_file(path, dense.entries(), args.format.into())?;
            }
            writeln!(out, "fallback=exact")?;
            writeln!(out, "n={n}")?;
            writeln!(out, "N_delta={n_delta}")?;
            return Ok(EXIT_OK);
        }
        Err(e @ Error::OrderBelowThreshold { .. }) => {
            writeln!(err, "error: {e}")?;
            writeln!(err, "hint: pass --allow-exact-fallback to export the exact dense inverse")?;
            return Ok(EXIT_BELOW_THRESHOLD);
        }
        Err(e) => return Err(e),
    };
    if let Some(path) = &args.out {
        let file = std::fs::File::create(path)?;
        io::write_band(std::io::BufWriter::new(file), &inv, args.format.into())?;
    }
    let f = inv.flops();
    writeln!(out, "bandwidth={}", inv.profile().bandwidth)?;
    writeln!(out, "corrections={}", inv.profile().corrections)?;
    writeln!(out, "d={}", inv.d())?;
    writeln!(out, "divisions={}", f.divisions)?;
    writeln!(out, "subtractions={}", f.subtractions)?;
    writeln!(out, "flops={}", f.total())?;
    Ok(EXIT_OK)
}

fn solve_options(method: Method, s: &StreamArgs) -> SolveOptions {
    SolveOptions {
        method,
        omit_left_correction: s.omit_left_correction,
        chunks: s.chunks,
        reseed_interval: s.reseed_interval,
    }
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let m = &args.matrix;
    spectral_params(m.a, m.b)?;
    let rhs = io::read_vector_file(&args.rhs)?;
    let n = args.n.unwrap_or(rhs.len());
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    let t = ToeplitzTridiagonal::new(m.a, m.b, n)?;
    let opts = solve_options(args.method.into(), &args.stream);
    let start = Instant::now();
    let report = match solver::solve(&t, &rhs, m.delta, &opts) {
        Ok(r) => r,
        Err(e @ (Error::OrderBelowThreshold { .. } | Error::OrderTooSmall { .. })) => {
            writeln!(err, "error: {e}")?;
            writeln!(err, "hint: use --method thomas for this order")?;
            return Ok(EXIT_BELOW_THRESHOLD);
        }
        Err(e) => return Err(e),
    };
    let wall = start.elapsed().as_secs_f64();
    if let Some(path) = &args.out {
        io::write_vector_file(path, &report.solution, args.format.into())?;
    }
    writeln!(out, "method={}", report.method_used)?;
    writeln!(out, "n={n}")?;
    writeln!(out, "residual_sup={:e}", report.residual_sup)?;
    writeln!(out, "flops={}", report.flops_estimate)?;
    writeln!(out, "wall_seconds={wall:.6}")?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, _err: &mut dyn Write) -> CmdResult {
    let m = &args.matrix;
    let t = ToeplitzTridiagonal::new(m.a, m.b, args.n)?;
    let p = spectral_params(m.a, m.b)?;
    let prof = band_profile(&p, m.delta)?;
    let bound = error_bound(&p, prof.k_delta)?;
    match args.mode {
        VerifyMode::Entry => {
            let exact = exact_inverse_dense(&t)?;
            let inv = match CompressedInverse::build(&t, m.delta) {
                Ok(inv) => inv,
                Err(Error::OrderBelowThreshold { n_delta, .. }) => {
                    writeln!(out, "fallback=exact")?;
                    writeln!(out, "N_delta={n_delta}")?;
                    writeln!(out, "max_err=0")?;
                    writeln!(out, "bound={bound:e}")?;
                    writeln!(out, "PASS")?;
                    return Ok(EXIT_OK);
                }
                Err(e) => return Err(e),
            };
            let approx = inv.materialize_dense()?;
            let max_err = approx.max_abs_diff(&exact);
            writeln!(out, "max_err={max_err:e}")?;
            writeln!(out, "bound={bound:e}")?;
            if max_err < bound {
                writeln!(out, "max_err < bound PASS")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "max_err >= bound FAIL")?;
                Ok(EXIT_VERIFY_FAILED)
            }
        }
        VerifyMode::Solve => {
            let rhs = random_rhs(args.n, args.seed);
            let reference = thomas_solve(&t, &rhs)?;
            let inv = CompressedInverse::build(&t, m.delta)?;
            let mut pass = true;
            for omit in [false, true] {
                let opts = SolveOptions {
                    omit_left_correction: omit,
                    ..solve_options(Method::Streaming, &args.stream)
                };
                let report = if opts.chunks > 1 {
                    solver::parallel_solve(&inv, &rhs, &opts)?
                } else {
                    solver::streaming_solve(&inv, &rhs, &opts)?
                };
                let rel = rel_sup_diff(&report.solution, &reference);
                pass &= rel <= args.tol;
                writeln!(out, "omit_left_correction={omit} rel_err={rel:e} residual_sup={:e}", report.residual_sup)?;
            }
            // forward right-sum recurrence, for the stability record
            let steps = 32.min(args.n - 2 * inv.d() - 1);
            if steps > 0 {
                let drift = stream_drift(&inv, &rhs, inv.d() + 1, steps, &SolveOptions::default())?;
                writeln!(out, "forward_drift_after_{steps}_rows={:e}", drift[steps - 1])?;
            }
            writeln!(out, "tol={:e}", args.tol)?;
            if pass {
                writeln!(out, "PASS")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "FAIL")?;
                Ok(EXIT_VERIFY_FAILED)
            }
        }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, _err: &mut dyn Write) -> CmdResult {
    if args.reps == 0 {
        return Err(Error::InvalidOption("--reps must be at least 1".into()));
    }
    let m = &args.matrix;
    writeln!(out, "method,n,median_seconds,flops")?;
    for &n in &args.n {
        let t = ToeplitzTridiagonal::new(m.a, m.b, n)?;
        let rhs = random_rhs(n, args.seed);
        for &method in &args.method {
            let mut times = Vec::with_capacity(args.reps);
            let mut flops = 0;
            for _ in 0..args.reps {
                let start = Instant::now();
                flops = match method {
                    BenchMethod::Invert => CompressedInverse::build(&t, m.delta)?.flops().total(),
                    BenchMethod::Streaming | BenchMethod::Banded | BenchMethod::Thomas => {
                        let method = match method {
                            BenchMethod::Streaming => Method::Streaming,
                            BenchMethod::Banded => Method::Banded,
                            _ => Method::Thomas,
                        };
                        let opts = solve_options(method, &args.stream);
                        solver::solve(&t, &rhs, m.delta, &opts)?.flops_estimate
                    }
                };
                times.push(start.elapsed().as_secs_f64());
            }
            let name = match method {
                BenchMethod::Streaming => "streaming",
                BenchMethod::Banded => "banded",
                BenchMethod::Thomas => "thomas",
                BenchMethod::Invert => "invert",
            };
            writeln!(out, "{name},{n},{:.9},{flops}", median(times))?;
        }
    }
    Ok(EXIT_OK)
}
