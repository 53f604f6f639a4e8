use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasireg::datagen::make_problem;
use quasireg::experiments::check::run_checks;
use quasireg::experiments::output::{fit_text, write_reconstruction, write_report};
use quasireg::experiments::{run_sweep, solve_cell, ExperimentConfig, ExperimentError};

#[derive(Parser)]
#[command(name = "quasireg", version, about = "Regularized coefficient recovery from boundary data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One reconstruction; writes a_alpha.csv and a_alpha.dat.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Noise level; defaults to the smallest entry of delta_list.
        #[arg(long)]
        delta: Option<f64>,
        /// Noise seed; defaults to the first entry of seeds.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Full sweep; writes rates, summary and fit files.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Randomized invariant suite.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<bool, ExperimentError> {
    match cli.command {
        Command::Solve { config, delta, seed } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let delta = delta.unwrap_or(*cfg.delta_list.last().expect("validated"));
            let seed = seed.unwrap_or(cfg.seeds[0]);
            if !(delta.is_finite() && delta >= 0.0) {
                return Err(ExperimentError::Config(format!("delta = {delta} must be finite and non-negative")));
            }
            let problem = make_problem(cfg.problem)?;
            let (rec, row) = solve_cell(&cfg, &problem, delta, seed)?;
            write_reconstruction(&cfg.output_dir, &problem, &rec)?;
            println!(
                "delta {:e} seed {} alpha {:e} err_l2 {:.6e} err_h1 {:.6e}",
                row.delta, row.seed, row.alpha, row.err_l2, row.err_h1
            );
            Ok(true)
        }
        Command::Sweep { config } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let report = run_sweep(&cfg)?;
            write_report(&cfg.output_dir, &report)?;
            print!("{}", fit_text(&report));
            Ok(true)
        }
        Command::Check { seed } => {
            let outcomes = run_checks(seed);
            for o in &outcomes {
                println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
            }
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
