//! Command-line surface: run flows, transforms, curve construction and
//! decomposition checks; serialize results as JSON, CSV, or SVG. Outputs are
//! byte-deterministic for a fixed invocation.

pub mod jobs;
pub mod output;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pondar", version, about = "isofocal deformations and Poncelet-Darboux curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    /// numerical tolerance override
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// output path (stdout when absent)
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// output format
    #[arg(long, default_value = "json")]
    pub format: String,
    /// seed reserved for randomized test-corpus generation; no documented
    /// artifact depends on it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sample an isofocal or bifocal flow over a parameter range
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// coefficients of phi, ascending, entries "re" or "re:im"
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        /// coefficients of f, ascending
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// coefficients of g (bifocal flow), ascending
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        /// initial positions, entries "re:im"
        #[arg(long, allow_hyphen_values = true)]
        positions: Option<String>,
        /// initial masses, entries "re:im"
        #[arg(long, allow_hyphen_values = true)]
        masses: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t1: f64,
        /// number of samples across [t0, t1]
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
    /// Continued-fraction coordinates of a pencil and their evolution
    Flaschka {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// evolve by this flow parameter
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
    },
    /// Poncelet-Darboux curve of a pencil: coefficients and grid samples
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// number of t-samples for the incidence grid
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Decomposability criterion, certificate, and conic components
    Decompose {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Explicit decomposable family pencils for n = 3, 5, 7
    Family {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        n: usize,
        /// parameters: 2 entries for n=3, 3 for n=5, 4 for n=7
        #[arg(long, allow_hyphen_values = true)]
        params: String,
    },
    /// Jacobi elliptic transformations and the arithmetic-function table
    Elliptic {
        #[command(flatten)]
        common: CommonArgs,
        /// odd transformation "n,m,mprime,k"
        #[arg(long, allow_hyphen_values = true)]
        transform_odd: Option<String>,
        /// even transformation: P coefficients (in z), even entries only
        #[arg(long, allow_hyphen_values = true)]
        even_p: Option<String>,
        /// even transformation: Q coefficients
        #[arg(long, allow_hyphen_values = true)]
        even_q: Option<String>,
        /// modulus for the even transformation
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// table of t, sigma', phi for odd n up to this bound
        #[arg(long)]
        odd_max: Option<u64>,
    },
    /// Foci, tangency data, and the inscribed-conic oracle
    Marden {
        #[command(flatten)]
        common: CommonArgs,
        /// positions, entries "re:im"
        #[arg(long, allow_hyphen_values = true)]
        positions: Option<String>,
        /// masses, entries "re:im"
        #[arg(long, allow_hyphen_values = true)]
        masses: Option<String>,
        /// three triangle vertices for the midpoint-tangency oracle
        #[arg(long, allow_hyphen_values = true)]
        triangle: Option<String>,
    },
}

pub fn classify(err: &jobs::JobError) -> (ExitCode, &'static str) {
    match err {
        jobs::JobError::Invalid(_) => (ExitCode::from(2), "invalid-input"),
        jobs::JobError::Numerical(_) => (ExitCode::from(3), "numerical-failure"),
        jobs::JobError::Io(_) => (ExitCode::from(3), "io-failure"),
    }
}
