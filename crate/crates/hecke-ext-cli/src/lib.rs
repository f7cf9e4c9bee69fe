//! Library side of the scenario runner: parsing of declarative scenario
//! files and deterministic execution into exact-rational report records.
//! The binary in `main.rs` is a thin argument-parsing shell over this.

pub mod runner;
pub mod scenario;

pub use runner::{run_scenario, records_text, table_text, ReportRecord, RunError};
pub use scenario::{parse_scenario, Scenario, ScenarioError};
