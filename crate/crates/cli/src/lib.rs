//! Scenario runner and report emitter for the `vbh` engine.

pub mod report;
pub mod runner;
pub mod scenario;

pub use report::{Report, Status};
pub use runner::{run_scenario, RunOptions, DEFAULT_UDEG};
pub use scenario::Scenario;
