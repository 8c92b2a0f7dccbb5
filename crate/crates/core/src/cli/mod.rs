//! Command-line front end. Exit codes: 0 when the checked condition holds,
//! 1 when it fails, 2 on any input or environment error.

pub mod render;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::loopspace::{closure_study, flow_study, DifferenceScheme};
use crate::twistcheck::{check, effective_h, structure_functions};

pub use spec::{load_spec, parse_spec, SpecError, SpecFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "twistkit",
    version,
    about = "Checks twisted Poisson structures and their lattice constraint algebra"
)]
pub struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "TWISTKIT_FORMAT",
        default_value = "text"
    )]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Poisson / twisted Poisson verdict.
    Check { spec: PathBuf },
    /// Nonzero structure functions of the constraint algebra.
    Structure { spec: PathBuf },
    /// First-class closure residual under lattice refinement.
    Lattice {
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        sites: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Constraint drift along an RK4 gauge flow.
    Flow {
        spec: PathBuf,
        #[arg(long, default_value_t = 32)]
        sites: usize,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        dt: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplies the generating test function.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda_scale: f64,
    },
    /// Print the spec with components in canonical form.
    Normalize { spec: PathBuf },
}

/// Result of a command: exit code and text for stdout.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn fail(msg: impl std::fmt::Display) -> String {
    format!("error: {msg}")
}

fn input_error(msg: impl std::fmt::Display) -> Result<Outcome, String> {
    Err(fail(msg))
}

fn check_sites(n: usize) -> Result<(), String> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(fail(format!(
            "site counts must be even and at least 4, got {n}"
        )));
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<Outcome, String> {
    let fmt = cli.format;
    match &cli.command {
        Command::Check { spec } => {
            let spec = load_spec(spec).map_err(fail)?;
            let report = check(&spec).map_err(fail)?;
            let stdout = match fmt {
                Format::Text => render::check_text(&report, spec.chart()),
                Format::Json => render::check_json(&report, spec.chart()),
                Format::Csv => render::check_csv(&report, spec.chart()),
            };
            Ok(Outcome {
                code: if report.is_twisted_poisson { 0 } else { 1 },
                stdout,
            })
        }
        Command::Structure { spec } => {
            let spec = load_spec(spec).map_err(fail)?;
            let c = effective_h(&spec)
                .and_then(|h| structure_functions(spec.pi(), &h))
                .map_err(fail)?;
            let stdout = match fmt {
                Format::Text => render::structure_text(&c, spec.chart()),
                Format::Json => render::structure_json(&c, spec.chart()),
                Format::Csv => render::structure_csv(&c, spec.chart()),
            };
            Ok(Outcome { code: 0, stdout })
        }
        Command::Lattice { spec, sites, seed } => {
            if sites.is_empty() {
                return input_error("--sites needs at least one value");
            }
            for &n in sites {
                check_sites(n)?;
            }
            let spec = load_spec(spec).map_err(fail)?;
            let table =
                closure_study(&spec, sites, *seed, DifferenceScheme::default()).map_err(fail)?;
            let stdout = match fmt {
                Format::Text => render::lattice_text(&table, *seed),
                Format::Json => render::lattice_json(&table, *seed),
                Format::Csv => render::lattice_csv(&table),
            };
            Ok(Outcome {
                code: if table.passed { 0 } else { 1 },
                stdout,
            })
        }
        Command::Flow {
            spec,
            sites,
            dt,
            steps,
            seed,
            lambda_scale,
        } => {
            check_sites(*sites)?;
            if !(*dt > 0.0 && dt.is_finite()) {
                return input_error(format!("--dt must be positive, got {dt}"));
            }
            if !lambda_scale.is_finite() {
                return input_error("--lambda-scale must be finite");
            }
            let spec = load_spec(spec).map_err(fail)?;
            let report =
                flow_study(&spec, *sites, *dt, *steps, *seed, *lambda_scale).map_err(fail)?;
            let stdout = match fmt {
                Format::Text => render::flow_text(&report, *seed),
                Format::Json => render::flow_json(&report, *seed),
                Format::Csv => render::flow_csv(&report),
            };
            Ok(Outcome {
                code: if report.within { 0 } else { 1 },
                stdout,
            })
        }
        Command::Normalize { spec } => {
            let spec = load_spec(spec).map_err(fail)?;
            let mut stdout = spec::to_json(&spec);
            stdout.push('\n');
            Ok(Outcome { code: 0, stdout })
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return 2;
            }
            out.code
        }
        Err(msg) => {
            eprintln!("{msg}");
            2
        }
    }
}
