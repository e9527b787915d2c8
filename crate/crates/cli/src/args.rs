//! Command-line arguments. Every subcommand struct doubles as the resolved
//! run configuration embedded in JSON output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Parser)]
#[command(name = "revmap", version, about = "Cycle statistics of reversible maps modelled as random involution pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; defaults to csv for `.csv` paths and json otherwise.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Exit with status 4 when any check fails.
    #[arg(long, global = true)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl OutputOpts {
    pub fn resolved_format(&self) -> Format {
        match (self.format, &self.out) {
            (Some(f), _) => f,
            (None, Some(path)) if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Period distribution of random reversible maps against its limit law.
    Involutions(InvolutionsArgs),
    /// Number of symmetric t-cycles per map against its exact and Poisson laws.
    Repeats(RepeatsArgs),
    /// Symmetric cycles of the Hénon map over F_p.
    Henon(HenonArgs),
    /// Fixed sets, good reduction and cycles of the 3D rational map over F_p.
    Map3d(Map3dArgs),
    /// Fixed-point law of random permutations against root counts of Φ₅ mod p.
    Cebotarev(CebotarevArgs),
    /// Reduction and roots of Φ₅ modulo primes.
    Phi5(Phi5Args),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnsembleArgs {
    /// Number of points N.
    #[arg(long)]
    pub n: u64,
    /// Fixed points of G.
    #[arg(long)]
    pub g: u64,
    /// Fixed points of H.
    #[arg(long)]
    pub h: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Master seed; trial k uses stream k of this seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InvolutionsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Enumerate the whole pair space (N <= 10) and compare exact masses.
    #[arg(long)]
    pub exact: bool,
    /// Comma-separated x grid (default 0.05, 0.10, ..., 5.00).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RepeatsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Period t.
    #[arg(long)]
    pub t: u64,
    /// Enumerate the whole pair space (N <= 10) and compare exact frequencies.
    #[arg(long)]
    pub exact: bool,
    /// Count every t-cycle, not only the symmetric ones.
    #[arg(long)]
    pub all_cycles: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PrimeSelection {
    /// A single prime.
    #[arg(long, conflicts_with_all = ["p_min", "p_max"])]
    pub p: Option<u64>,
    /// Lower end of a prime range (inclusive).
    #[arg(long, requires = "p_max")]
    pub p_min: Option<u64>,
    /// Upper end of a prime range (inclusive).
    #[arg(long, requires = "p_min")]
    pub p_max: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HenonArgs {
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub a: i64,
    #[command(flatten)]
    #[serde(flatten)]
    pub primes: PrimeSelection,
    /// Periods whose symmetric cycles are counted by orbit search (repeatable).
    #[arg(long)]
    pub t: Vec<u64>,
    /// Also decompose the whole phase space into cycles.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Map3dArgs {
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub e: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub k: i64,
    /// A prime p = 3 (mod 4).
    #[arg(long)]
    pub p: u64,
    /// Periods whose symmetric cycles are counted by orbit search (repeatable).
    #[arg(long)]
    pub t: Vec<u64>,
    /// Seed for sampled involution checks on large fields.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CebotarevArgs {
    #[arg(long, default_value_t = 6)]
    pub degree: u64,
    /// Primes for empirical Φ₅ root-count frequencies (requires degree 6).
    #[command(flatten)]
    #[serde(flatten)]
    pub primes: PrimeSelection,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Phi5Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub primes: PrimeSelection,
}
