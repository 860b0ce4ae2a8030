use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use ftrl_bandits::harness::sweep::{run_sweep, SweepConfig};
use ftrl_bandits::harness::verify::run_suite;
use ftrl_bandits::harness::run_experiment;
use ftrl_bandits::ExperimentConfig;

#[derive(Parser)]
#[command(name = "ftrl-bandits", version, about = "FTRL bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and print its summary as JSON.
    Run {
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the cartesian product of a sweep file.
    Sweep { config: PathBuf },
    /// Run the built-in acceptance suite; exits 1 if any criterion fails.
    Verify {
        #[arg(long, default_value = "verify-output")]
        output: PathBuf,
        /// Comma-separated criterion ids to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> ftrl_bandits::Result<ExitCode> {
    match cli.command {
        Command::Run { config, output } => {
            let mut config = ExperimentConfig::from_path(&config)?;
            if output.is_some() {
                config.output = output;
            }
            let outcome = run_experiment(&config)?;
            println!("{}", serde_json::to_string_pretty(&outcome.summary)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config } => {
            let sweep = SweepConfig::from_path(&config)?;
            let summaries = run_sweep(&sweep)?;
            println!(
                "{} combinations written to {}",
                summaries.len(),
                sweep.output.join("sweep.csv").display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { output, only } => {
            let mut started = Instant::now();
            let report = run_suite(&output, only.as_deref(), |o| {
                let verdict = match (o.passed, o.informational) {
                    (true, _) => "PASS",
                    (false, true) => "INFO",
                    (false, false) => "FAIL",
                };
                println!(
                    "[{verdict}] {:>2} {}: {} ({:.1}s)",
                    o.id,
                    o.title,
                    o.detail,
                    started.elapsed().as_secs_f64()
                );
                started = Instant::now();
            })?;
            let failed = report.outcomes.iter().filter(|o| !o.passed && !o.informational).count();
            println!("{} criteria, {failed} failed", report.outcomes.len());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
