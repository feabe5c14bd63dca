//! Estimates of pairwise precision and recall for entity resolution from
//! samples of ground-truth clusters.
//!
//! Benchmark datasets for entity resolution are usually a handful of fully
//! resolved clusters, drawn from a much larger population. Computing
//! precision on those records alone is badly optimistic: a predicted cluster
//! that wrongly merges a sampled entity with an unsampled one looks perfect
//! once restricted to the sample. The estimators in [`estimators`] account
//! for how the clusters were sampled and extrapolate to the full data.
//!
//! ```
//! use clusterwise::{Clustering, ClusterSample, SamplingDesign, Metric, estimate};
//!
//! let pred = Clustering::from_groups(&[vec!["1", "4"], vec!["2", "3"], vec!["5"], vec!["6", "7", "8"]])?;
//! let sample = ClusterSample::new(
//!     vec![vec!["1".into(), "2".into(), "3".into()], vec!["6".into(), "7".into()]],
//!     SamplingDesign::parse("cluster_block", "cluster_size")?,
//! )?;
//! let est = estimate(&pred, &sample, Metric::Precision)?;
//! assert!(est.value > 0.0 && est.value <= 1.0);
//! # Ok::<(), clusterwise::Error>(())
//! ```

pub mod clustering;
pub mod error;
pub mod estimators;
pub mod io;
pub mod sim;

pub use clustering::{exact_precision_recall, pair_stats, Clustering, MembershipVector, PairStats};
pub use error::{Error, Result};
pub use estimators::{
    estimate, estimate_with, ClusterSample, Estimate, EstimateOptions, Metric, SamplingDesign, SamplingType,
    WeightScheme, Weights,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
