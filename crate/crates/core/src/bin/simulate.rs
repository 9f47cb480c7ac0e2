use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use triqed::scenario::{load_config_with, load_preset, run_scenario, write_outputs, PRESET_NAMES};
use triqed::{Error, Result};

/// Run a three-level atom / cavity-field scenario and write its observables.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Args {
    /// Scenario file (TOML).
    config: Option<PathBuf>,
    /// Use a bundled scenario instead of a file.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Output directory; overrides `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a scenario key, e.g. `--set atom.delta=5`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Also draw SVG charts.
    #[arg(long)]
    svg: bool,
    /// List bundled scenarios and exit.
    #[arg(long)]
    list_presets: bool,
}

fn run(args: &Args) -> Result<()> {
    let config = match (&args.config, &args.preset) {
        (Some(path), None) => load_config_with(path, &args.overrides)?,
        (None, Some(name)) => load_preset(name, &args.overrides)?,
        _ => return Err(Error::config("give a scenario file or --preset NAME")),
    };
    let output = run_scenario(&config)?;
    let dir = args.out.clone().unwrap_or_else(|| config.output.directory.clone());
    let written = write_outputs(&config, &output, &dir, args.svg || config.output.svg)?;
    let poles = output.rows.iter().filter(|r| r.values.is_none()).count();
    eprintln!(
        "{} rows ({} at coupling poles), {} files in {}",
        output.rows.len(),
        poles,
        written.len(),
        dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_presets {
        for name in PRESET_NAMES {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
