//! Experiment registry, reports and one-off computations behind the `toeplab` binary.

pub mod compute;
pub mod error;
pub mod experiments;
pub mod report;
mod sampling;

pub use compute::{compute, ComputeRequest, Verb};
pub use error::CliError;
pub use experiments::{list_experiments, run_experiment, ExperimentInfo, RunConfig, DEFAULT_SEED};
pub use report::{ExperimentReport, Status};
