//! Experiment runner for the quantum kicked top: configuration, scenario
//! presets, CSV/manifest output and optional SVG plots.

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod runner;

pub use config::{parse_config, RawConfig, Scenario, ScenarioConfig};
pub use error::{CliError, CliResult};
pub use runner::{run_scenario, RunSummary};
