//! Experiment orchestration for the domain-decomposition solver: runs the
//! monolithic, parallel and single-local timing protocols, persists raw
//! timings and renders efficiency reports.

pub mod config;
pub mod error;
pub mod experiment;
pub mod report;
pub mod results_io;

pub use config::{ExperimentConfig, OutputFormat, PartitionSpec};
pub use error::{BenchError, Result};
pub use experiment::{run_experiment, EnvStamp, ResultSet, RunRow};
pub use report::{derive_report, emit, render};
pub use results_io::{load_results, save_results};
