//! `qjanowski` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qjanowski::verify::AuditConfig;

/// Environment variable naming the default spec file.
pub const SPEC_ENV: &str = "QJANOWSKI_SPEC";

#[derive(Debug, Parser)]
#[command(name = "qjanowski", version)]
#[command(about = "q-Ruscheweyh Janowski classes: coefficient tests, bounds and a theorem audit")]
pub struct Cli {
    #[command(flatten)]
    pub spec: SpecArgs,

    #[command(flatten)]
    pub knobs: Knobs,

    /// Output format (default: json for `extremal` and `audit`, pretty otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Class parameters, either from a JSON file or given inline (all six).
/// Without either, the file named by `QJANOWSKI_SPEC` is used.
#[derive(Debug, Args)]
pub struct SpecArgs {
    /// JSON spec file: {"q":..,"m":..,"l":..,"alpha":..,"A":..,"B":..}.
    #[arg(long, global = true, value_name = "PATH")]
    pub spec: Option<PathBuf>,
    #[arg(long, global = true)]
    pub q: Option<f64>,
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long, global = true)]
    pub l: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long = "A", global = true, allow_hyphen_values = true, value_name = "A")]
    pub a: Option<f64>,
    #[arg(long = "B", global = true, allow_hyphen_values = true, value_name = "B")]
    pub b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Knobs {
    /// RNG seed for the randomized checks.
    #[arg(long, global = true, default_value_t = AuditConfig::default().seed)]
    pub seed: u64,
    /// Truncation degree N of generated series.
    #[arg(long, global = true, default_value_t = qjanowski::series::DEFAULT_DEGREE)]
    pub degree: usize,
    /// Largest coefficient index scanned by the radius infima.
    #[arg(long, global = true, default_value_t = qjanowski::bounds::DEFAULT_K_MAX)]
    pub kmax: usize,
    /// Radii of the subordination grid.
    #[arg(long, global = true, default_value_t = 24)]
    pub grid_radial: usize,
    /// Angles of the subordination grid.
    #[arg(long, global = true, default_value_t = 96)]
    pub grid_angular: usize,
    /// Outer radius of the subordination grid.
    #[arg(long, global = true, default_value_t = 0.995)]
    pub rmax: f64,
    /// Initial trapezoid node count for integral means.
    #[arg(long, global = true, default_value_t = 512)]
    pub nodes: usize,
    /// Random members per spec in the audit (all sampled claims).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficient test, grid subordination test and (for negative-coefficient
    /// non-members) a real witness for a series file.
    Check {
        /// Series JSON: {"degree":N,"coefficients":[[re,im],...]} with a₁ = 1.
        series: PathBuf,
    },
    /// The extremal single-term member f_k (k = 1 gives z).
    Extremal {
        #[arg(long)]
        k: usize,
    },
    /// Distortion envelopes and the three radii.
    Bounds {
        /// Radii in [0, 1), comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        r: Vec<f64>,
        /// Orders in [0, 1), comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        psi: Vec<f64>,
    },
    /// Checks every claim over a spec grid and emits one report per line.
    Audit {
        /// JSON array of specs; the built-in 108-spec grid when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Also write a CSV summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Integral means of a member against those of f_2.
    IntegralMeans {
        /// Negative-coefficient series file; f_2 alone when omitted.
        series: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.6,0.9")]
        r: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        s: Vec<f64>,
    },
    /// Convex weights of a member over the extreme points z, f_2, f_3, ...
    Decompose {
        series: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
