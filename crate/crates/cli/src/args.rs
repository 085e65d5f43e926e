use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ivar", version, about = "Periodic orbits and recurrence equations of integrable maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maps, their parameters and the periods with a known variety.
    List(ListArgs),
    /// Sample points and check period, conservation or exclusivity.
    Verify(VerifyArgs),
    /// Seeded points on an invariant variety.
    Sample(SampleArgs),
    /// Derive recurrence polynomials and compare them with the fixtures.
    Eliminate(EliminateArgs),
    /// Iterate a map from a given point.
    Orbit(OrbitArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Map parameters; QRT takes six comma-separated rationals per flag.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// a',b',c',d',e',f'
    #[arg(long, allow_hyphen_values = true)]
    pub qp: Option<String>,
    /// a'',b'',c'',d'',e'',f''
    #[arg(long, allow_hyphen_values = true)]
    pub qpp: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record real wall time (reports are otherwise byte-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct ListArgs {
    #[arg(long)]
    pub map: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub period: u32,
    #[arg(long, default_value_t = 100)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Scan points off the variety for returns at any period up to --scan-max.
    #[arg(long)]
    pub off_variety: bool,
    #[arg(long, default_value_t = 12)]
    pub scan_max: usize,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub period: u32,
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EliminateArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub period: u32,
    /// Image coordinate to solve for (default: all covered ones).
    #[arg(long)]
    pub index: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[arg(long)]
    pub map: String,
    /// Comma-separated rational coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub init: String,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
