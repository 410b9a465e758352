//! The `fricke` command-line tool.
//!
//! [`run`] parses arguments, dispatches to a command and writes its output;
//! the returned value is the process exit code (0 success, 1 domain error or
//! empty search, 2 usage error).

pub mod appendix;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fricke_core::{Axis, DEFAULT_PRECISION};

pub use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fricke_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "fricke", version, about = "Trace coordinates, relations and relation loci for hyperbolic cone tori")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(u32).range(53..=1 << 16))]
    pub precision: u32,
    /// Override the tolerance the command uses (identity, validity or certification).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (12 significant digits).
    #[arg(long, global = true)]
    pub csv: bool,
}

impl GlobalOpts {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the integer trace polynomial g_w(x, y, z) of a word.
    Tracepoly { word: String },
    /// Evaluate a word's holonomy matrix at a point.
    Eval {
        word: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Classify the image of a word at a point.
    Classify {
        word: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Triangle angles (θA, θB, θC) to trace coordinates.
    Phi { theta_a: String, theta_b: String, theta_c: String },
    /// Trace coordinates to triangle angles.
    PhiInv {
        /// Cone angle; derived from the commutator trace when omitted.
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// Decide whether u lies in the normal closure of r^m.
    Newman { u: String, r: String, m: u32 },
    /// Decide whether u lies in the normal closure of some proper power.
    TorsionType { u: String },
    /// Search a coordinate curve family for relation loci.
    FindLocus(FindLocusArgs),
    /// Intersect two loci pinned on different coordinates.
    DoublePoint(DoublePointArgs),
    /// Check the published trace table for 0-surgered two-bridge knots.
    VerifyAppendix,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum BranchArg {
    #[default]
    Larger,
    Smaller,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub theta: String,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    /// Solved from the cone angle when omitted.
    #[arg(long)]
    pub z: Option<String>,
    /// Root to take when z is solved.
    #[arg(long, value_enum, default_value_t = BranchArg::Larger)]
    pub branch: BranchArg,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse::<Axis>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct LocusSpec {
    /// Pinned coordinate (default z, or x with --torsion).
    #[arg(long, value_parser = parse_axis)]
    pub coord: Option<Axis>,
    /// Inclusive range of N as A:B, A..=B or a single value.
    #[arg(long = "N-range", visible_alias = "n-range", default_value = "1:64")]
    pub n_range: String,
    /// Sampling grid for the pinned coordinate, start:end:step.
    #[arg(long, default_value = "2.05:12:0.01")]
    pub grid: String,
    /// Look for w_N of rotation angle 2πp/q instead of trivial u_N.
    #[arg(long)]
    pub torsion: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct FindLocusArgs {
    #[arg(long)]
    pub theta: String,
    #[command(flatten)]
    pub locus: LocusSpec,
    /// Curve points checked per locus.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    /// Bisection stopping width in the pinned coordinate.
    #[arg(long, default_value_t = 1e-30)]
    pub bisection_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DoublePointArgs {
    #[arg(long)]
    pub theta: String,
    #[arg(long, value_parser = parse_axis)]
    pub coord1: Axis,
    #[arg(long = "N1", visible_alias = "n1")]
    pub n1: String,
    #[arg(long)]
    pub grid1: String,
    #[arg(long)]
    pub torsion1: Option<String>,
    #[arg(long, value_parser = parse_axis)]
    pub coord2: Axis,
    #[arg(long = "N2", visible_alias = "n2")]
    pub n2: String,
    #[arg(long)]
    pub grid2: String,
    #[arg(long)]
    pub torsion2: Option<String>,
}

/// What a command produced: rendered output plus whether it counts as success.
pub struct Outcome {
    pub body: String,
    pub ok: bool,
}

/// Runs an already parsed command line.
pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    commands::dispatch(&cli.command, &cli.global)
}

/// Parses `args` (program name first), runs the command and writes to `out` / `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = out.write_all(outcome.body.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
