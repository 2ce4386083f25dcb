use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hokt_core::benchgen::EventKind;
use hokt_core::experiment::{
    parse_weight_schedule, report, run_experiment, DatasetConfig, DatasetKind, ExperimentConfig,
    RESULTS_FILE,
};
use hokt_core::io::{emit_similarity, similarity_csv, write_network};
use hokt_core::transfer::similarity_matrix;
use hokt_core::{io::load_network, HoktError, Result};

#[derive(Parser)]
#[command(
    name = "hokt",
    version,
    about = "Dynamic community detection with higher-order knowledge transfer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Synfix,
    Events,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic benchmark as a dataset directory.
    Generate {
        #[arg(value_enum)]
        generator: Generator,
        /// Event family for `events`.
        #[arg(long, default_value = "birth_death")]
        kind: String,
        #[arg(long)]
        timesteps: Option<usize>,
        /// External links per node for `synfix`.
        #[arg(long)]
        z_out: Option<usize>,
        /// Keep every n-th snapshot.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Overlap-ratio matrix of a dataset as CSV.
    Similarity {
        dataset: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Base seed; run r uses seed + r.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        sigma: Option<f64>,
        /// Highest transfer order.
        #[arg(long)]
        order: Option<usize>,
        /// Fixed weights, e.g. "4=0.6,0.4;5=0.8,0.2".
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarise a results table (file or output directory).
    Report {
        results: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| HoktError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate {
            generator,
            kind,
            timesteps,
            z_out,
            stride,
            seed,
            out,
        } => {
            let mut ds = DatasetConfig {
                stride,
                ..DatasetConfig::default()
            };
            match generator {
                Generator::Synfix => {
                    ds.kind = DatasetKind::Synfix;
                    ds.synfix.seed = seed;
                    ds.synfix.timesteps = timesteps.unwrap_or(ds.synfix.timesteps);
                    ds.synfix.z_out = z_out.unwrap_or(ds.synfix.z_out);
                }
                Generator::Events => {
                    ds.kind = DatasetKind::Events;
                    ds.events.kind = EventKind::parse(&kind)?;
                    ds.events.seed = seed;
                    ds.events.timesteps = timesteps.unwrap_or(ds.events.timesteps);
                }
            }
            let net = ds.build()?;
            write_network(&net, &out, Some(&ds))?;
            eprintln!("wrote {} snapshots to {}", net.len(), out.display());
            Ok(())
        }
        Command::Similarity { dataset, out } => {
            let net = load_network(&dataset)?;
            match out {
                Some(path) => emit_similarity(&net, &path),
                None => write_text(None, &similarity_csv(&similarity_matrix(&net)?)),
            }
        }
        Command::Run {
            config,
            seed,
            sigma,
            order,
            weights,
            runs,
            workers,
            out,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(v) = seed {
                cfg.experiment.base_seed = v;
            }
            if let Some(v) = sigma {
                cfg.hokt.sigma = v;
            }
            if let Some(v) = order {
                cfg.hokt.max_order = v;
            }
            if let Some(v) = weights {
                cfg.hokt.weights = parse_weight_schedule(&v)?;
            }
            if let Some(v) = runs {
                cfg.experiment.runs = v;
            }
            if let Some(v) = workers {
                cfg.experiment.workers = v;
            }
            if let Some(v) = out {
                cfg.experiment.output_dir = v;
            }
            let table = run_experiment(&cfg)?;
            eprintln!(
                "{} rows written to {}",
                table.rows.len(),
                cfg.experiment.output_dir.display()
            );
            Ok(())
        }
        Command::Report { results, out } => {
            let path = if results.is_dir() {
                results.join(RESULTS_FILE)
            } else {
                results
            };
            write_text(out.as_deref(), &report(&path)?)
        }
    }
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!(
                "error[E_USAGE] {}",
                one_line(first.trim_start_matches("error: "))
            );
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}] {}", e.code(), one_line(&e.to_string()));
            ExitCode::FAILURE
        }
    }
}
