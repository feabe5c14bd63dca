//! The design-blind baseline: metrics computed only on the records of the
//! sampled clusters.

use super::ClusterSample;
use crate::clustering::{pair_stats, Clustering, PairStats};
use crate::error::Result;

/// Pair counts of the sampled clusters against the prediction restricted to
/// their records. Repeated draws of a cluster count once.
pub fn naive_pair_stats(pred: &Clustering, sample: &ClusterSample) -> Result<PairStats> {
    let mut distinct: Vec<Vec<String>> = sample
        .clusters()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    let truth = Clustering::from_groups(&distinct)?;
    let restricted = pred.restrict(truth.universe())?;
    pair_stats(&truth, &restricted)
}

/// `(precision, recall)` of the restricted prediction against the sampled
/// clusters. Biased: ignores links to records outside the sample.
pub fn naive_precision_recall(pred: &Clustering, sample: &ClusterSample) -> Result<(f64, f64)> {
    let stats = naive_pair_stats(pred, sample)?;
    Ok((stats.precision()?, stats.recall()?))
}
