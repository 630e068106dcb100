use clap::{Parser, Subcommand};
use knn_moo::runner::{self, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "knn-moo",
    version,
    about = "Multi-objective search under noisy fitness evaluation",
    long_about = "Runs seeded experiment campaigns comparing noise-handling strategies \
                  (resampling vs. archive-based neighbor averaging) inside NSGA-II, then \
                  derives hypervolume/fitness-error statistics, significance tables, and \
                  plot-ready CSV data."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment campaign described by a TOML config file.
    ///
    /// Exit code 0: all runs finished. 1: the config was rejected or output
    /// could not be written. 2: the campaign finished but some runs failed
    /// (they are recorded in manifest.toml and excluded from statistics).
    Run {
        /// Experiment config file (TOML).
        config: PathBuf,
        /// Override the config's base_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Cap on concurrently executing runs (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write and print the pairwise verdict table of a finished experiment.
    Table {
        /// Experiment output directory (contains manifest.toml).
        dir: PathBuf,
    },
    /// Write long-format metric CSVs (hv_pred, hv_eff, delta_f) for plotting.
    Plots {
        /// Experiment output directory (contains manifest.toml).
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> knn_moo::Result<ExitCode> {
    match cli.command {
        Command::Run { config, seed, jobs, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.base_seed = seed;
            }
            if let Some(out) = out {
                cfg.output_dir = Some(out);
            }
            let outcome = runner::run_experiment(&cfg, jobs)?;
            println!(
                "{}: {} runs completed, {} failed → {}",
                cfg.name,
                outcome.completed,
                outcome.failed,
                outcome.dir.display()
            );
            Ok(if outcome.failed > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Table { dir } => {
            let (csv_path, txt_path) = runner::emit_verdict_table(&dir)?;
            let table = std::fs::read_to_string(&txt_path).map_err(|e| knn_moo::Error::Io {
                path: txt_path.display().to_string(),
                source: e,
            })?;
            print!("{table}");
            println!("wrote {} and {}", csv_path.display(), txt_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Plots { dir } => {
            let files = runner::emit_plot_data(&dir)?;
            println!("wrote {} plot-data files under {}", files.len(), dir.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
