use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use gauge2_cli::report::{emit_report, Format};
use gauge2_cli::scenario::parse_scenario_in;
use gauge2_cli::suite::{run_suite, Suite, SuiteError};

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Records,
}

/// Exact verification of 2-gauge identities on a scenario file.
#[derive(Parser)]
#[command(name = "gauge2", version)]
struct Args {
    /// Scenario file describing the module, pairing and connections.
    #[arg(long)]
    scenario: PathBuf,
    /// Suite to run: axioms, bianchi, closedness, chsas, chern-weil,
    /// proof-steps, gauge-invariance, eom, boundary or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of random trials per check.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Writes the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("gauge2: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    let text = match std::fs::read_to_string(&args.scenario) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("{}: {e}", args.scenario.display())),
    };
    let base = args.scenario.parent().map(PathBuf::from).unwrap_or_default();
    let mut scenario = match parse_scenario_in(&text, &base) {
        Ok(s) => s,
        Err(e) => return usage_error(format!("{}: {e}", args.scenario.display())),
    };
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    if let Some(trials) = args.trials {
        scenario.trials = trials;
    }
    let report = match run_suite(&scenario, suite) {
        Ok(r) => r,
        Err(e @ SuiteError::Requirement(_)) => return usage_error(e),
        Err(e) => {
            eprintln!("gauge2: {e}");
            return ExitCode::from(1);
        }
    };
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Records => Format::Records,
    };
    let rendered = emit_report(&report, format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                return usage_error(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{rendered}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
