use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hmu_cli::acceptance;
use hmu_cli::commands::{
    cmd_apply, cmd_classify, cmd_moments, cmd_probe, cmd_verify_identity, cmd_verify_outputs,
    exit_code_for, Overrides, RunContext,
};
use hmu_cli::config::ExperimentConfig;

/// Numerical experiments with Hilbert-type operators induced by measures on
/// [0, 1), acting on weighted Bergman and Dirichlet spaces.
#[derive(Parser)]
#[command(name = "hmu", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for result files (default: out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for random test families; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for probe grids (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Integration tolerance; overrides the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Moment and tail tables of the configured measure.
    Moments,
    /// Carleson classification: exponent fit, ratio table, verdicts.
    Classify,
    /// Apply the operator to a function; optional matrix dump.
    Apply,
    /// Residuals between the series and integral realizations.
    VerifyIdentity,
    /// Theorem probes: lower-bound-scan, ratio-sup, duality, compactness.
    Probe,
    /// Run the full acceptance suite.
    Selftest,
    /// Check that result files in --out embed the hash of --config.
    VerifyOutputs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err((err, code)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, (anyhow::Error, u8)> {
    let overrides = Overrides {
        out: cli.out.clone(),
        seed: cli.seed,
        jobs: cli.jobs,
        tol: cli.tol,
    };

    if let Command::Selftest = cli.command {
        let out_dir = cli.out.unwrap_or_else(|| PathBuf::from("out"));
        let results = acceptance::run_all(cli.seed.unwrap_or(0), cli.jobs.unwrap_or(0), &out_dir)
            .map_err(|e| (e, 3u8))?;
        let mut all_passed = true;
        for r in &results {
            println!("{}", r.line());
            all_passed &= r.passed;
        }
        return if all_passed {
            println!("selftest: all {} criteria passed", results.len());
            Ok(ExitCode::SUCCESS)
        } else {
            Ok(ExitCode::from(3))
        };
    }

    let config_path = cli
        .config
        .ok_or_else(|| (anyhow::anyhow!("this command needs --config PATH"), 2u8))?;
    let config = ExperimentConfig::load(&config_path).map_err(|e| (e, 2u8))?;
    let ctx = RunContext::new(config, &overrides).map_err(|e| (e, 2u8))?;

    let result = match cli.command {
        Command::Moments => cmd_moments(&ctx),
        Command::Classify => cmd_classify(&ctx),
        Command::Apply => cmd_apply(&ctx),
        Command::VerifyIdentity => cmd_verify_identity(&ctx),
        Command::Probe => cmd_probe(&ctx),
        Command::VerifyOutputs => {
            let bad = cmd_verify_outputs(&ctx).map_err(|e| (e, 2u8))?;
            return if bad.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            };
        }
        Command::Selftest => unreachable!(),
    };
    match result {
        Ok(()) => Ok(ExitCode::SUCCESS),
        Err(e) => {
            let code = exit_code_for(&e) as u8;
            Err((e, code))
        }
    }
}
