//! Scenario presets, config files, replication and file output.

pub mod config;
pub mod output;
pub mod presets;
pub mod report;
pub mod validate;

pub use config::ScenarioSpec;
pub use presets::Preset;
pub use report::{compare, replicate, ComparisonReport, Metric, Quartiles, Verdict};
