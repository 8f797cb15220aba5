//! Command-line frontend: configuration, suite orchestration and report emission.

mod commands;
pub mod config;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;

pub use config::RunConfig;
pub use report::{emit, PlotRow, Report, Summary};
pub use suite::{run_suite, SuiteOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "orlicz-lab", version, about = "Numerical laboratory for Orlicz and Wiener amalgam spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated output formats (json, csv).
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Option<Vec<String>>,
    /// Corpus seed; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the Young-function catalog with flags.
    Catalog,
    /// Luxemburg (or Amemiya) norm of a named function.
    Norm {
        #[arg(long)]
        young: String,
        #[arg(long = "fn")]
        function: String,
        /// Modular target; λ gives the parametric norm.
        #[arg(long, default_value_t = 1.0)]
        target: f64,
        #[arg(long)]
        amemiya: bool,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
    },
    /// Legendre conjugate Ψ(y) at the given points.
    Conjugate {
        #[arg(long)]
        young: String,
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<f64>,
    },
    /// Continuous and discrete amalgam norms of a named function.
    Amalgam {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        phi2: String,
        #[arg(long, default_value_t = 64)]
        x_resolution: usize,
    },
    /// λ-sweep of the W(L^p, L^q) norm of a dilated function; CSV output.
    DilationScan {
        /// Local exponent; `inf` allowed.
        #[arg(long)]
        p: f64,
        /// Global exponent; `inf` allowed.
        #[arg(long)]
        q: f64,
        #[arg(long = "fn", default_value = "gaussian")]
        function: String,
        #[arg(long, default_value_t = 4)]
        per_octave: usize,
    },
    /// Zak transform on the unit square; CSV of the grid values.
    Zak {
        #[arg(long = "fn", default_value = "gaussian")]
        function: String,
        #[arg(short = 'k', long = "truncation", default_value_t = 32)]
        k: usize,
        #[arg(short = 'n', long = "resolution", default_value_t = 128)]
        n: usize,
        /// Walk through the Balian–Low argument for the Gaussian instead.
        #[arg(long)]
        balian_low: bool,
    },
    /// Run the full property suite and write a report.
    Verify,
}

/// Parses `argv` and runs the command, writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("usage error");
                    let _ = writeln!(err, "{first}");
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io { .. } => EXIT_IO,
                _ => EXIT_USAGE,
            }
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout(), std::io::stderr());
    run_with(argv, &mut out, &mut err)
}
