//! Experiment runner.
//!
//! `radk run <experiment_id> [--config cfg.json] [--out path]
//!  [--format csv|json] [--seed N]`
//!
//! Exit codes: 0 = pass, 1 = equivalence bound violated, 2 = config error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use radk::experiment::{run_experiment, ExperimentConfig, ExperimentId};
use radk::report::{emit_report, render, ReportFormat};
use radk::Error;

#[derive(Parser)]
#[command(
    name = "radk",
    about = "Rearrangement-invariant norms, K-functionals, and Rademacher sum experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named experiment and emit its report.
    Run {
        /// Experiment id (khintchine, identity3, theorem1, holmstedt9,
        /// montgomery, example1, example2, remark2, realizer,
        /// reiteration18, indices).
        experiment: String,
        /// JSON config; defaults are used when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the available experiment ids.
    List,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config { .. } | Error::Json(_) => 2,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch() -> Result<bool, Error> {
    match Cli::parse().cmd {
        Cmd::List => {
            for id in ExperimentId::ALL {
                println!("{id}");
            }
            Ok(true)
        }
        Cmd::Run {
            experiment,
            config,
            out,
            format,
            seed,
        } => {
            let id = ExperimentId::from_str(&experiment)?;
            let format = ReportFormat::from_str(&format)?;
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_json_file(&path)?,
                None => ExperimentConfig::default_for(id),
            };
            cfg.experiment_id = id;
            if let Some(s) = seed {
                cfg.seed = Some(s);
            }
            let report = run_experiment(&cfg)?;
            match &out {
                Some(path) => emit_report(&report, format, path)?,
                None => print!("{}", render(&report, format)?),
            }
            eprintln!(
                "{}: ratio range [{:.6e}, {:.6e}] over {} rows — {}",
                report.experiment_id,
                report.ratio_min,
                report.ratio_max,
                report.rows.len(),
                if report.pass { "PASS" } else { "FAIL" }
            );
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            Ok(report.pass)
        }
    }
}
