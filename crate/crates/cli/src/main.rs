//! `pvi`: command-line front end for the PVIμ connection, continuation,
//! elliptic-representation and monodromy routines.

mod commands;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pvi_core::{CoveringPoint, MonodromyTriple};

use crate::output::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "pvi",
    version,
    about = "Critical behaviour and connection problem of PVIμ"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert between a monodromy triple and critical data (σ, a).
    Connect(ConnectArgs),
    /// Run an end-to-end pipeline and compare against its prediction or oracle.
    Verify(VerifyArgs),
    /// Continue a solution along a path and write the trace as CSV.
    Trace(TraceArgs),
    /// Evaluate the elliptic representation and its correction v.
    Elliptic(EllipticArgs),
    /// Numerical monodromy of the Fuchsian system attached to a solution.
    Monodromy(MonodromyArgs),
    /// Sample critical domains as plot-ready CSV.
    Domains(DomainsArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Parameter μ of the equation (`re+imi`, real, or `[re, im]`).
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub mu: Complex64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Point {
    Zero,
    One,
    Infinity,
}

#[derive(Args, Debug)]
pub struct ConnectArgs {
    #[command(flatten)]
    pub common: Common,
    /// Monodromy triple `x0,x1,xinf` (inverse direction).
    #[arg(long, value_parser = parse::triple, allow_hyphen_values = true, conflicts_with_all = ["sigma", "a"])]
    pub triple: Option<MonodromyTriple>,
    /// Critical exponent at 0 (forward direction).
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "a")]
    pub sigma: Option<Complex64>,
    /// Critical amplitude at 0 (forward direction).
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "sigma")]
    pub a: Option<Complex64>,
    /// Critical point for the inverse direction.
    #[arg(long, value_enum, default_value = "zero")]
    pub point: Point,
    /// Largest shift `n` in the alias listing `±σ + 2n`.
    #[arg(long, default_value_t = 1)]
    pub aliases: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Pipeline {
    /// Seed at 0 from the inverse map, integrate towards 1, fit and compare
    /// with the predicted data at 1.
    Connection,
    /// Continue Picard's closed form and compare with it along the path.
    Picard,
    /// Continue the μ = 1 rational solution and compare with it.
    Rational,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Parameter μ; fixed to 1/2 (picard) and 1 (rational) when omitted.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub mu: Option<Complex64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "connection")]
    pub pipeline: Pipeline,
    /// Monodromy triple for the connection pipeline.
    #[arg(long, value_parser = parse::triple, allow_hyphen_values = true)]
    pub triple: Option<MonodromyTriple>,
    /// Picard parameters.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "1")]
    pub nu1: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "0.5")]
    pub nu2: Complex64,
    /// Amplitude of the rational solution `a x/(1 − (1−a) x)`.
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    /// Acceptance tolerance: relative deviation from the predicted leading
    /// terms near 1 (connection, default 1e-2) or absolute error against the
    /// closed form (picard 1e-6, rational 1e-8).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Modulus of the seed point of the connection pipeline.
    #[arg(long, default_value_t = 1e-30)]
    pub seed_x: f64,
    /// End point of the connection pipeline on the real axis.
    #[arg(long, default_value_t = 0.999)]
    pub target: f64,
    /// Multiplies the seed amplitude, to exercise the failure path.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "1")]
    pub corrupt_a: Complex64,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Waypoints `m,a;m,a;...`; the solution is seeded at the first one.
    #[arg(long)]
    pub path: String,
    /// Critical data at 0 used to seed with the leading terms.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "a", conflicts_with_all = ["y", "dy"])]
    pub sigma: Option<Complex64>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "sigma")]
    pub a: Option<Complex64>,
    /// Explicit seed value and derivative.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "dy")]
    pub y: Option<Complex64>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "y")]
    pub dy: Option<Complex64>,
    /// Relative tolerance of the integrator.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct EllipticArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub nu1: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub nu2: Complex64,
    /// Evaluation point `modulus,argument`.
    #[arg(long, value_parser = parse::point, allow_hyphen_values = true)]
    pub x: CoveringPoint,
    /// Fixed-point tolerance of the iteration.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Radius of the domain in which the iteration is run.
    #[arg(long, default_value_t = 0.05)]
    pub r: f64,
    /// Also report the PVIμ residual of the produced value.
    #[arg(long)]
    pub residual: bool,
}

#[derive(Args, Debug)]
pub struct MonodromyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Point `modulus,argument` at which the system is built.
    #[arg(long, value_parser = parse::point, allow_hyphen_values = true, default_value = "0.3,0")]
    pub x: CoveringPoint,
    /// Critical data at 0; the solution is continued from the seed point to `x`.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "a", conflicts_with_all = ["y", "dy"])]
    pub sigma: Option<Complex64>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "sigma")]
    pub a: Option<Complex64>,
    /// Explicit value and derivative of the solution at `x`.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "dy")]
    pub y: Option<Complex64>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "y")]
    pub dy: Option<Complex64>,
    /// Modulus of the seed point when continuing from critical data.
    #[arg(long, default_value_t = 1e-30)]
    pub seed_x: f64,
    /// Gauge constant of the system.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "1")]
    pub k0: Complex64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DomainKind {
    /// Spiral domain of the critical expansion, with the strip B.
    Spiral,
    /// Domain of the elliptic representation.
    Elliptic,
}

#[derive(Args, Debug)]
pub struct DomainsArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "spiral")]
    pub kind: DomainKind,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub sigma: Option<Complex64>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta2: f64,
    #[arg(long, default_value_t = 0.9)]
    pub sigma_tilde: f64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub nu1: Option<Complex64>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub nu2: Option<Complex64>,
    #[arg(long, default_value_t = 0.05)]
    pub r: f64,
    /// Number of random samples.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Seed of the sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Smallest sampled modulus.
    #[arg(long, default_value_t = 1e-8)]
    pub min_modulus: f64,
    /// Sampled arguments lie in `[−arg_max, arg_max]`.
    #[arg(long, default_value_t = 20.0)]
    pub arg_max: f64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Connect(a) => commands::connect(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Trace(a) => commands::trace(&a),
        Command::Elliptic(a) => commands::elliptic(&a),
        Command::Monodromy(a) => commands::monodromy(&a),
        Command::Domains(a) => commands::domains(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
