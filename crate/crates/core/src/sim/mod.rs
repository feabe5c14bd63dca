//! Samplers, error injection, synthetic data and the Monte-Carlo runner.

pub mod benchmark;
pub mod inject;
pub mod persons;
pub mod population;
pub mod rng;
pub mod runner;
pub mod sampling;
pub mod union_find;

pub use benchmark::{benchmark_on, run_benchmark_bias_experiment, BenchmarkReport};
pub use inject::inject_misattribution;
pub use persons::{
    generate_synthetic_population, read_attributes, rule_based_matcher, write_attributes, NoiseConfig, PersonRecord,
    SyntheticPersonConfig,
};
pub use population::{generate_truth, SyntheticTruthConfig};
pub use rng::{stream, stream_id, SimRng};
pub use runner::{
    run_coverage_experiment, run_simulation, run_simulation_on, run_simulation_threads, BaseTruth, CoverageReport,
    ErrorSummary, EstimatorName, ReportCell, SimulationConfig, SimulationReport,
};
pub use sampling::{draw_cluster_indices, sample_clusters};
pub use union_find::UnionFind;
