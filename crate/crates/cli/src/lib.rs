//! Command-line experiments on EP-pair topology.
//!
//! Every command writes its artifacts into `--out` and returns a
//! [`CliError`] whose [`exit_code`](CliError::exit_code) is the process
//! status: 0 success, 2 configuration, 3 empty result, 4 numerical failure,
//! 5 certificate failure.

pub mod checks;
mod commands;
pub mod json;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("no result: {0}")]
    Empty(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Empty(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Certificate(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "eptopo", version, about = "Topology of exceptional-point pairs")]
pub struct Cli {
    /// Model JSON, e.g. {"model": "nh_dirac", "b_x": 1.0}
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Loop JSON (circle, polyline or arcs)
    #[arg(long = "loop", global = true)]
    pub loop_file: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Residual tolerance for EP refinement
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Initial sample count for loop tracing
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate EPs of the model inside a rectangle; writes eps.json
    FindEps {
        /// x_min,x_max,y_min,y_max
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        region: String,
        /// Cells per side of the search grid
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Trace the eigenvalue branches along the loop; writes trace.json
    Trace {
        /// Also write the per-sample trace.csv
        #[arg(long)]
        csv: bool,
    },
    /// Degree-k word table; writes table_<k>.csv
    Table {
        k: u32,
        /// Also list the words, table_<k>_words.csv
        #[arg(long)]
        words: bool,
    },
    /// Spectrum grids and EP constraint loci
    Surface {
        /// x_min,x_max,y_min,y_max
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        region: String,
        /// Grid points, `N` or `NXxNY`
        #[arg(long, default_value = "201")]
        grid: String,
    },
    /// Run all certificates; writes certificates.json
    Verify {
        /// JSON overriding grid sizes and sample counts
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Stereographic projection of sphere points, or the inverse
    Project {
        /// Plane to sphere instead
        #[arg(long)]
        inverse: bool,
        /// CSV with a header row: nt,chit,xit (or n,chi with --inverse)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Single point, comma separated; repeatable
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Lift a word to a covering; writes lift.json
    Lift {
        /// Word over a, b (A, B inverse), `e` for the identity
        word: String,
        /// Covering JSON; default is the two-sheet cover over ∓i
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
}
