//! The `frlp` command line: transforms, decompositions, norms, the check
//! suite and test-signal generation over `frlp-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod oracles;
pub mod registry;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Config, Overrides};
use crate::error::{CliResult, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "frlp", version, about = "Chirp-conjugated Littlewood-Paley toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Grid as `L,N` (extent, samples per axis).
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Fractional angle in radians.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Gate empirical checks too.
    #[arg(long, global = true)]
    pub strict: bool,
    /// csv, bin or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Flat JSON config; defaults to `$FRLP_CONFIG`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional Fourier transform of a signal file.
    Frft {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Littlewood-Paley blocks and a JSON ledger.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        jmin: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        jmax: Option<i32>,
        /// inhomogeneous or homogeneous.
        #[arg(long, default_value = "inhomogeneous")]
        variant: String,
    },
    /// A function-space norm of a signal file.
    Norms {
        #[arg(long)]
        input: PathBuf,
        /// besov, triebel, sobolev, lipschitz, bmo, hardy or pullback.
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Oscillation exponent for bmo.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Lipschitz order.
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Skip the chirp: classical norms.
        #[arg(long)]
        classical: bool,
    },
    /// Run the check registry.
    Check {
        /// Glob over entry ids, e.g. `dyadic.*`.
        #[arg(long)]
        filter: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-entry wall-clock times here.
        #[arg(long)]
        timings: Option<PathBuf>,
        /// List the entries without running them.
        #[arg(long)]
        list: bool,
        /// Multiply every exact tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tighten: f64,
    },
    /// Generate a test signal.
    Gen {
        /// gaussian, chirp, bump, haar-atom, bmo-corpus or frft-atom.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: PathBuf,
        /// Width for gaussian and bump.
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Haar level.
        #[arg(long, default_value_t = 2)]
        level: u32,
        /// Haar cell or cube offset in samples / cells.
        #[arg(long, default_value_t = 0)]
        offset: usize,
        /// Atom cube side in samples.
        #[arg(long, default_value_t = 32)]
        side: usize,
        /// Atom exponent p.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Atom exponent q.
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Corpus size.
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Print s, cot and deviation for a list of angles.
    Descriptors {
        #[arg(allow_hyphen_values = true)]
        alphas: Vec<f64>,
    },
}

impl Common {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            grid: self.grid.clone(),
            dim: self.dim,
            alpha: self.alpha,
            seed: self.seed,
            strict: self.strict,
            format: self.format.clone(),
        }
    }

    pub fn resolve(&self) -> CliResult<Config> {
        Config::load(self.config.as_deref())?.apply(&self.overrides())
    }
}

/// Parse `args` and execute; returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("frlp: {e}");
            e.exit_code()
        }
    }
}
