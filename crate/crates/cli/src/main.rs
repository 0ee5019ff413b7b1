use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mppt_cli::commands::{self, CompareArgs, GenerateArgs, TrainArgs};
use mppt_cli::config::RunConfig;
use mppt_cli::CliError;
use mppt_core::{DatasetSpec, TrainConfig};

#[derive(Parser)]
#[command(name = "mppt", version, about = "PV maximum power point tracking toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the (G, T) grid through the MPP oracle and write a dataset CSV.
    Generate {
        #[arg(long, default_value_t = 100.0)]
        g_min: f64,
        #[arg(long, default_value_t = 1000.0)]
        g_max: f64,
        #[arg(long, default_value_t = 50.0)]
        g_step: f64,
        #[arg(long, default_value_t = 273.0)]
        t_min: f64,
        #[arg(long, default_value_t = 323.0)]
        t_max: f64,
        #[arg(long, default_value_t = 5.0)]
        t_step: f64,
        #[arg(long, default_value_t = 0.2)]
        holdout: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "dataset.csv")]
        out: PathBuf,
    },
    /// Train the network on a dataset CSV; writes the model and its loss history.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        #[arg(long, default_value_t = 5000)]
        max_epochs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Trailing fraction of the dataset used for validation.
        #[arg(long, default_value_t = 0.2)]
        holdout: f64,
        #[arg(long, default_value = "model.json")]
        out: PathBuf,
    },
    /// Run one scenario from a TOML run configuration.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides MPPT_OUTPUT_DIR and the config file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Benchmark P&O, Inc-Cond and Rprop-NN over the 2 s and 10 s ramps.
    Compare {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "compare")]
        out: PathBuf,
        /// Also run the constant-STC ripple test.
        #[arg(long)]
        with_ripple_test: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { g_min, g_max, g_step, t_min, t_max, t_step, holdout, seed, out } => {
            let spec =
                DatasetSpec { g_min, g_max, g_step, t_min, t_max, t_step, holdout_fraction: holdout, rng_seed: seed };
            let report = commands::generate(&GenerateArgs { spec, out: out.clone() })?;
            println!(
                "wrote {} samples ({} held out) to {}; oracle re-check: {} mismatches",
                report.samples,
                report.validation,
                out.display(),
                report.mismatches
            );
        }
        Command::Train { data, eps, max_epochs, seed, holdout, out } => {
            let config = TrainConfig { epsilon: eps, max_epochs, rng_seed: seed, ..TrainConfig::default() };
            let outcome = commands::train(&TrainArgs { data, config, holdout, out })?;
            println!(
                "final E = {:e} after {} epochs; validation max error = {:.3}% of p_max",
                outcome.final_loss,
                outcome.epochs,
                100.0 * outcome.validation_max_error
            );
            println!("model: {}  history: {}", outcome.model_path.display(), outcome.history_path.display());
            if !outcome.converged {
                return Err(CliError::NotConverged { final_loss: outcome.final_loss, model: outcome.model_path });
            }
        }
        Command::Simulate { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let outcome = commands::simulate(&cfg, out.as_deref())?;
            let m = outcome.metrics;
            println!(
                "{}: tracking_efficiency={:.5} steady_state_ripple={:.5} settle_time={:.3}s -> {}",
                outcome.controller,
                m.tracking_efficiency,
                m.steady_state_ripple,
                m.settle_time,
                outcome.trace_path.display()
            );
        }
        Command::Compare { model, out, with_ripple_test } => {
            let report = commands::compare(&CompareArgs { model, out, with_ripple_test })?;
            println!("{:<14} {:<10} {:>10} {:>10} {:>8}", "scenario", "controller", "efficiency", "ripple", "settle");
            for r in &report.rows {
                match (&r.error, r.tracking_efficiency, r.steady_state_ripple, r.settle_time) {
                    (None, Some(e), Some(rp), Some(st)) => {
                        println!("{:<14} {:<10} {:>10.5} {:>10.5} {:>8.3}", r.scenario, r.controller, e, rp, st)
                    }
                    (err, ..) => {
                        println!("{:<14} {:<10} FAILED: {}", r.scenario, r.controller, err.as_deref().unwrap_or("?"))
                    }
                }
            }
            if let (Some(nn), Some(po), Some(ic)) = (
                report.efficiency("ramp-2s", "rprop-nn"),
                report.efficiency("ramp-2s", "po"),
                report.efficiency("ramp-2s", "inc-cond"),
            ) {
                let verdict = if nn >= po && nn >= ic { "at or above" } else { "BELOW" };
                println!("ramp-2s: rprop-nn efficiency is {verdict} both baselines");
            }
            println!("summary: {}", report.summary_path.display());
            let failed = report.failures();
            if failed > 0 {
                return Err(CliError::PartialBenchmark {
                    failed,
                    total: report.rows.len(),
                    summary: report.summary_path,
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
