//! Scenario harness for the roadlink simulator: declarative TOML experiment
//! configs, the ISM band report, PRT sweeps, and deterministic CSV outputs.

pub mod bands;
pub mod config;
pub mod error;
pub mod scenario;
pub mod sweep;

pub use bands::{band_report, BandInfo};
pub use config::ScenarioConfig;
pub use error::{HarnessError, Result};
pub use scenario::{load_bundled, run_scenario, RunArtifacts, BUNDLED};
pub use sweep::{prt_sweep, PrtRow};
