//! Command-line driver: scenario runs, file comparison, mask
//! compilation, and loss-scaling arithmetic.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use binwalk_core::efficiency::{crossover_steps, mesh_component_count, required_step_efficiency};
use binwalk_core::error::Error;
use binwalk_core::export::{compare_files, export_masks, export_results};
use binwalk_core::scenario::{load_preset, run_scenario, OutputFormat, ScenarioConfig, PRESETS};

/// Seed override environment variable (precedence: flag > env > config).
const SEED_ENV: &str = "BINWALK_SEED";

#[derive(Parser)]
#[command(name = "binwalk", version, about = "quantum-walk unitaries on a frequency-bin mode space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioSource {
    /// Scenario config file (strict JSON)
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset name (see `binwalk presets list`)
    #[arg(long)]
    preset: Option<String>,
    /// Measurement seed override (takes precedence over BINWALK_SEED and the config)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and export its artifacts
    Run {
        #[command(flatten)]
        source: ScenarioSource,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated artifacts to emit: csv, json, svg, masks
        /// (default: the config's `outputs` list)
        #[arg(long, value_delimiter = ',')]
        format: Vec<String>,
    },
    /// Compare the position columns of two exported runs
    Compare {
        a: PathBuf,
        b: PathBuf,
    },
    /// Compile the pump masks of every target mode at one step
    Masks {
        #[command(flatten)]
        source: ScenarioSource,
        /// Walk step to compile masks for
        #[arg(long)]
        step: u64,
        /// Output directory
        #[arg(long, default_value = "out/masks")]
        out: PathBuf,
    },
    /// Loss-scaling comparison against sequential architectures
    Efficiency {
        /// Per-step transmission of the sequential architecture
        #[arg(long)]
        eta: f64,
        /// End-to-end efficiency of the single-projection approach
        #[arg(long)]
        total: f64,
        /// Also report the step efficiency required to reach --total after this many steps
        #[arg(long)]
        steps: Option<u64>,
        /// Also report the component count of a d x d beam-splitter mesh
        #[arg(long)]
        mesh: Option<u64>,
    },
    /// Built-in presets
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    /// List preset names and what they reproduce
    List,
}

fn load_scenario(source: &ScenarioSource) -> Result<ScenarioConfig, Error> {
    let mut config = match (&source.config, &source.preset) {
        (Some(path), None) => ScenarioConfig::from_file(path)?,
        (None, Some(name)) => load_preset(name)?,
        _ => {
            return Err(Error::config(
                "scenario",
                "exactly one of --config or --preset is required",
            ))
        }
    };
    // flag > env > config
    let env_seed = std::env::var(SEED_ENV).ok().map(|raw| {
        raw.parse::<u64>().map_err(|_| {
            Error::config(SEED_ENV, format!("`{raw}` is not a valid 64-bit seed"))
        })
    });
    if let Some(seed) = source.seed {
        config = config.with_seed(seed);
    } else if let Some(parsed) = env_seed {
        config = config.with_seed(parsed?);
    }
    Ok(config)
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { source, out, format } => {
            let config = load_scenario(&source)?;
            let formats = if format.is_empty() {
                if config.outputs.is_empty() {
                    vec![OutputFormat::Csv, OutputFormat::Json]
                } else {
                    config.outputs.clone()
                }
            } else {
                format
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<OutputFormat>, _>>()?
            };
            let result = run_scenario(&config)?;
            let written = export_results(&result, &out, &formats)?;
            println!(
                "scenario `{}`: {} steps, mean similarity {:.6}",
                result.similarity.scenario,
                result.similarity.steps.len(),
                result.similarity.mean_similarity
            );
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Compare { a, b } => {
            let report = compare_files(&a, &b)?;
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| Error::config("report", e.to_string()))?;
            println!("{text}");
            Ok(())
        }
        Command::Masks { source, step, out } => {
            let config = load_scenario(&source)?;
            let written = export_masks(&config, step, &out)?;
            println!(
                "wrote {} masks for step {} under {}",
                written.len(),
                step,
                out.display()
            );
            Ok(())
        }
        Command::Efficiency { eta, total, steps, mesh } => {
            let crossover = crossover_steps(eta, total)?;
            println!(
                "sequential architecture at eta = {eta} drops below total efficiency {total} after {crossover} steps"
            );
            if let Some(n) = steps {
                let required = required_step_efficiency(n, total)?;
                println!(
                    "reaching total efficiency {total} after {n} steps requires step efficiency {required:.6}"
                );
            }
            if let Some(d) = mesh {
                let count = mesh_component_count(d)?;
                println!("a {d}x{d} mesh needs {count} beam splitters");
            }
            Ok(())
        }
        Command::Presets { action } => match action {
            PresetsAction::List => {
                for (name, _, description) in PRESETS {
                    println!("{name:18} {description}");
                }
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_io() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
