//! Command-line front end: synthetic matrices, spectra, tolerance sweeps,
//! benchmarks, and image compression to and from `.eodf` containers.

mod commands;
pub mod dense;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] eodabe::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input or usage, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_input_error() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "eodabe",
    version,
    about = "Adaptive randomized UTV decomposition tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EpsMode {
    Abs,
    Rel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    LowRankNoise,
    DevilsStairs,
    FastDecay,
    SlowDecay,
    RankDeficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Eodabe,
    Rsvd,
    Svd,
}

/// Decomposition settings shared by the matrix and image commands.
#[derive(Debug, Clone, Args)]
pub struct DecompFlags {
    #[arg(long, value_enum, default_value = "abs")]
    pub eps_mode: EpsMode,
    /// Block size k.
    #[arg(long, default_value_t = 32)]
    pub block: usize,
    /// Power iterations τ.
    #[arg(long, default_value_t = 1)]
    pub tau: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Synthetic matrix class.
#[derive(Debug, Clone, Args)]
pub struct SpecFlags {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Matrix order.
    #[arg(long)]
    pub n: usize,
    /// Rank for low-rank-noise and rank-deficient.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Noise level for low-rank-noise.
    #[arg(long, default_value_t = 0.005)]
    pub alpha: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a PPM/PGM image into an .eodf container and print a quality report.
    Compress {
        input: PathBuf,
        output: PathBuf,
        /// Tolerance on intensities scaled to [0, 1].
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[command(flatten)]
        decomp: DecompFlags,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
    /// Rebuild a binary PPM/PGM image from an .eodf container.
    Decompress { input: PathBuf, output: PathBuf },
    /// Write a synthetic test matrix as dense text.
    Gen {
        #[command(flatten)]
        spec: SpecFlags,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate R-values next to reference singular values (CSV: i,r_value,sigma).
    Svals {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        #[command(flatten)]
        decomp: DecompFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detected rank and relative error per tolerance (CSV: epsilon,rank,rel_err).
    SweepEps {
        input: PathBuf,
        /// Comma-separated tolerances; defaults to 1e-9,1e-8,…,1e-1.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[command(flatten)]
        decomp: DecompFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time and accuracy of each algorithm on one synthetic matrix. The
    /// adaptive run goes first and its detected rank is the fixed target of
    /// the others. The matrix uses --seed, the algorithms --seed + 1.
    Bench {
        #[command(flatten)]
        spec: SpecFlags,
        #[arg(long, value_delimiter = ',', default_value = "eodabe,rsvd,svd")]
        algo: Vec<Algo>,
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        #[command(flatten)]
        decomp: DecompFlags,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
