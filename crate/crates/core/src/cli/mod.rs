//! Command-line front end: `solve`, `convergence`, `compare`, `properties`
//! and `bench`.
//!
//! Settings come from an optional `key = value` file, then from flags; a flag
//! wins over the file. Exit codes: 0 success, 1 configuration or usage error,
//! 2 numerical or I/O failure, 3 a threshold check failed.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use commands::{execute, CommandOutput};
pub use config::{parse_config, AlphaSpec, Command, Format, MeasureKind, RunConfig};
pub use report::{emit, format_e, format_g, render_report, report_csv, report_markdown, speedup_table, table, CSV_HEADER};

/// Environment variable fixing the worker count of the global pool.
pub const THREADS_VAR: &str = "VO_TFMID_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_THRESHOLD: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "vo-tfmid", version, about = "Spline collocation solvers for variable-order mobile/immobile diffusion")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Run one scheme and report its final-time error.
    Solve(Settings),
    /// Observed orders over a refinement in time or space.
    Convergence {
        #[command(flatten)]
        settings: Settings,
        /// Exit with code 3 when an observed order leaves the accepted band.
        #[arg(long)]
        assert: bool,
    },
    /// Run several schemes on the same problem and mesh.
    Compare(Settings),
    /// Run the built-in property checks.
    Properties(Settings),
    /// Time the direct and fast ADI schemes over a list of N.
    Bench(Settings),
}

/// Flags shared by every subcommand; each maps onto a configuration key.
#[derive(Debug, Args)]
struct Settings {
    /// File of `key = value` lines.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<String>,
    /// Comma-separated schemes for `compare`.
    #[arg(long)]
    schemes: Option<String>,
    /// a0..a3, affine:p,q or const:a.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    /// Final time.
    #[arg(long = "T", value_name = "T")]
    horizon: Option<String>,
    /// Time levels, e.g. `1024` or `2^4,2^5,2^6`.
    #[arg(long = "N", value_name = "N")]
    levels: Option<String>,
    #[arg(long = "Mx", value_name = "MX")]
    mx: Option<String>,
    #[arg(long = "My", value_name = "MY")]
    my: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    /// `time` or `space`.
    #[arg(long)]
    axis: Option<String>,
    /// `exact` or `two_mesh`.
    #[arg(long)]
    measure: Option<String>,
    /// `final`, `t=<time>` or `level=<k>`.
    #[arg(long)]
    probe: Option<String>,
    #[arg(long, short)]
    output: Option<String>,
    /// Write collocation values of the final solution (`solve`).
    #[arg(long)]
    solution: Option<String>,
    /// `csv` or `md`.
    #[arg(long)]
    format: Option<String>,
    /// Include wall seconds in reports.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    repeats: Option<String>,
    /// Property suite or check name.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long = "order-min")]
    order_min: Option<String>,
    #[arg(long = "order-max")]
    order_max: Option<String>,
}

impl Settings {
    fn overrides(&self) -> Vec<(String, String)> {
        let pairs = [
            ("scheme", &self.scheme),
            ("schemes", &self.schemes),
            ("alpha", &self.alpha),
            ("problem", &self.problem),
            ("kappa", &self.kappa),
            ("T", &self.horizon),
            ("N", &self.levels),
            ("Mx", &self.mx),
            ("My", &self.my),
            ("epsilon", &self.epsilon),
            ("axis", &self.axis),
            ("measure", &self.measure),
            ("probe", &self.probe),
            ("output", &self.output),
            ("solution", &self.solution),
            ("format", &self.format),
            ("repeats", &self.repeats),
            ("filter", &self.filter),
            ("order_min", &self.order_min),
            ("order_max", &self.order_max),
        ];
        let mut out: Vec<(String, String)> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if self.timing {
            out.push(("timing".into(), "true".into()));
        }
        out
    }
}

/// Parses arguments into a validated configuration.
pub fn config_from_args<I, T>(args: I) -> std::result::Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
    let (command, settings, assert) = match cli.command {
        CliCommand::Solve(s) => (Command::Solve, s, false),
        CliCommand::Convergence { settings, assert } => (Command::Convergence, settings, assert),
        CliCommand::Compare(s) => (Command::Compare, s, false),
        CliCommand::Properties(s) => (Command::Properties, s, false),
        CliCommand::Bench(s) => (Command::Bench, s, false),
    };
    let text = match &settings.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Run(Error::Config(format!("cannot read {}: {e}", path.display()))))?,
        None => String::new(),
    };
    let mut cfg = parse_config(command, &text, &settings.overrides()).map_err(CliError::Run)?;
    cfg.assert = assert;
    Ok(cfg)
}

#[derive(Debug)]
pub enum CliError {
    /// Argument syntax, `--help` or `--version`.
    Clap(clap::Error),
    Run(Error),
}

/// Exit code of a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Domain(_) | Error::Usage(_) => EXIT_CONFIG,
        Error::Singular(_) | Error::Oracle(_) | Error::Internal(_) | Error::Step { .. } | Error::Io(_) => EXIT_RUNTIME,
    }
}

/// Sizes the global rayon pool from `VO_TFMID_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n = raw
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_VAR} = `{raw}` is not a positive integer")))?;
    // a second call in the same process keeps the first pool
    if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
        log::debug!("global thread pool already initialised");
    }
    Ok(())
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    let cfg = match config_from_args(args) {
        Ok(cfg) => cfg,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let out = match execute(&cfg).and_then(|out| emit(&out.body, cfg.output.as_deref()).map(|()| out)) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    for note in &out.notes {
        eprintln!("threshold: {note}");
    }
    if out.threshold_failed {
        EXIT_THRESHOLD
    } else {
        EXIT_OK
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_reach_the_configuration() {
        let cfg = config_from_args([
            "vo-tfmid", "convergence", "--assert", "--scheme", "qsc_l1p", "--N", "2^4,2^5", "--Mx", "8", "--timing",
        ])
        .unwrap();
        assert_eq!(cfg.command, Command::Convergence);
        assert!(cfg.assert && cfg.timing);
        assert_eq!(cfg.levels, vec![16, 32]);
    }

    #[test]
    fn codes_follow_error_classes() {
        assert_eq!(exit_code(&Error::Config(String::new())), EXIT_CONFIG);
        let step = Error::Step { level: 3, source: Box::new(Error::Singular(String::new())) };
        assert_eq!(exit_code(&step), EXIT_RUNTIME);
        assert_eq!(main_with_args(["vo-tfmid", "solve", "--Mx", "0"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["vo-tfmid", "nonsense"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["vo-tfmid", "--help"]), EXIT_OK);
    }
}
