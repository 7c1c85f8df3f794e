//! Experiment configuration, single discovery runs, the MSE study and the benchmark grid.

mod benchmark;
mod config;
mod discover;
mod mse;

pub use benchmark::{
    run_benchmark, test_set, training_points, Aggregate, BenchmarkResult, CellError, CellRecord, Metric, TEST_HALTON_SKIP,
};
pub use config::{ExperimentConfig, Method, RfValidation};
pub use discover::{discover, discover_many, relabel, rule_extraction, trajectory_on, Discovery, Relabeled};
pub use mse::{mse_experiment, MseConfig, MseFormula, MseReport};
