use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use roadlink_harness::scenario::write_atomic;
use roadlink_harness::{bands, config::ScenarioConfig, load_bundled, run_scenario, HarnessError, BUNDLED};

#[derive(Parser)]
#[command(
    name = "roadlink",
    version,
    about = "Scenario-driven simulator for a dual-mode (radar + comm) 5.8 GHz FHSS radio"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single scenario from a config file or the bundled set.
    Run {
        /// Path to a scenario TOML file.
        #[arg(long, conflicts_with = "scenario")]
        config: Option<PathBuf>,
        /// Name of a bundled scenario (see `list`).
        #[arg(long)]
        scenario: Option<String>,
        /// Override the scenario's seed list with this single seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for CSV artifacts.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
    /// Run the PRT sweep of a config (mode = "prt_sweep").
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
    /// Print the ISM band comparison table.
    Bands {
        /// Also write bands.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the bundled scenarios.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run {
            config,
            scenario,
            seed,
            out,
        } => {
            let mut cfg = load_config(config, scenario)?;
            apply_seed(&mut cfg, seed);
            run_and_print(&cfg, &out)
        }
        Command::Sweep { config, seed, out } => {
            let text = fs::read_to_string(&config)?;
            let mut cfg = ScenarioConfig::from_toml(&text)?;
            apply_seed(&mut cfg, seed);
            if cfg.sweep.is_none() {
                return Err(HarnessError::Validation(vec![
                    "sweep: section required by the sweep subcommand".into(),
                ]));
            }
            run_and_print(&cfg, &out)
        }
        Command::Bands { out } => {
            print!("{}", bands::bands_table());
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                let path = dir.join("bands.csv");
                write_atomic(&path, &bands::bands_csv())?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::List => {
            for (name, text) in BUNDLED {
                let description = text
                    .lines()
                    .find_map(|l| l.strip_prefix("description = "))
                    .map(|d| d.trim_matches('"'))
                    .unwrap_or("");
                println!("{name:<16} {description}");
            }
            Ok(())
        }
    }
}

fn load_config(
    config: Option<PathBuf>,
    scenario: Option<String>,
) -> Result<ScenarioConfig, HarnessError> {
    match (config, scenario) {
        (Some(path), None) => {
            let text = fs::read_to_string(&path)?;
            ScenarioConfig::from_toml(&text)
        }
        (None, Some(name)) => load_bundled(&name),
        _ => Err(HarnessError::Validation(vec![
            "run: pass exactly one of --config PATH or --scenario NAME".into(),
        ])),
    }
}

fn apply_seed(config: &mut ScenarioConfig, seed: Option<u64>) {
    if let Some(s) = seed {
        config.seeds = vec![s];
    }
}

fn run_and_print(config: &ScenarioConfig, out: &std::path::Path) -> Result<(), HarnessError> {
    let artifacts = run_scenario(config, out)?;
    print!("{}", artifacts.summary);
    for file in &artifacts.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}
