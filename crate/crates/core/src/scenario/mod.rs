//! Scenario files, sweeps and their outputs.

pub mod config;
pub mod output;
pub mod runner;
pub mod svg;

pub use config::{
    load_config, load_config_with, load_preset, parse_config, ScenarioConfig, SweepAxis,
    PRESET_NAMES,
};
pub use output::{emit_csv, emit_phase_grid, write_outputs, CSV_HEADER};
pub use runner::{run_scenario, ObservableRow, RowValues, ScenarioOutput};
