use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "wright-radii",
    version,
    about = "Zeros and geometric radii of normalized four-parameter Wright functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Positive zeros of 𝔚(s) = W(−s²) and of Ψ′, Ψ(s) = s^{ab}𝔚(s)
    Zeros(ZerosArgs),
    /// Solve one radius problem
    Radius(RadiusArgs),
    /// Solve and verify radius problems over a grid; emits one row per point
    Sweep(SweepArgs),
    /// Run the randomized inequality suites and the zero-sum/series comparison
    Verify(VerifyArgs),
    /// Taylor coefficients of g(z)/z in z² and of h(z)/z in z
    Table(TableArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Star,
    Convex,
    ExpStar,
    ExpConvex,
    Spiral,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    F,
    G,
    H,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// Width of the final bracket around each zero, relative to max(1, s)
    #[arg(long, default_value_t = 1e-13, value_parser = positive)]
    pub refine_tol: f64,
    /// Read zeros from this JSON file when it covers the request; otherwise compute and write it
    #[arg(long)]
    pub zero_cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub count: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, value_enum)]
    pub norm: NormArg,
    /// Number of zeros of 𝔚 used by the zero sums
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(2..))]
    pub zero_count: u32,
    /// Root-finding tolerance on the radius
    #[arg(long, default_value_t = 1e-12, value_parser = positive)]
    pub tol: f64,
    #[arg(long, default_value_t = 720, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    pub eps: f64,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_parser = unit_interval)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Sample the defining condition around the radius; exit 1 if it fails
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Grid,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Grid,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Grid,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Grid,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<Grid>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<Grid>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Grid>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, default_value_t = 1e-13, value_parser = positive)]
    pub refine_tol: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Trials per inequality
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Random points per normalization in the zero-sum/series comparison
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(50..))]
    pub zero_count: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub terms: u32,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
}

/// A single value or an inclusive range `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        match parts.as_slice() {
            [x] => Ok(Grid(vec![num(x)?])),
            [start, stop, step] => {
                let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
                if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
                    return Err("range needs finite ends and a positive step".into());
                }
                // Index-based so the end point survives rounding.
                let n = ((stop - start) / step + 1e-9).floor();
                if n < 0.0 {
                    return Ok(Grid(Vec::new()));
                }
                Ok(Grid((0..=n as usize).map(|i| start + i as f64 * step).collect()))
            }
            _ => Err(format!("expected a number or start:stop:step, got {s:?}")),
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x <= 1.0 {
        Ok(x)
    } else {
        Err(format!("must lie in (0, 1], got {s}"))
    }
}
