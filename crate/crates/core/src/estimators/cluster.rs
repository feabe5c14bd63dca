//! Cluster sampling with probabilities known up to a normalizing factor.

use super::ratio::ratio_with_std;
use super::{resolve_clusters, ClusterSample, Estimate};
use crate::clustering::{choose2, Clustering};
use crate::error::{Error, Result};

/// Ratio estimator with `A_s = |c_s|/p_s` and `B_s = N·g(c_s, Ĉ)/p_s`.
pub fn precision_cluster(pred: &Clustering, sample: &ClusterSample) -> Result<Estimate> {
    let predicted = pred.pair_count()?;
    if predicted == 0 {
        return Err(Error::NoPredictedLinks);
    }
    let universe = pred.universe_size() as f64;
    let clusters = resolve_clusters(pred, sample.clusters())?;
    let weights = sample.cluster_weights();
    let mut a = Vec::with_capacity(clusters.len());
    let mut b = Vec::with_capacity(clusters.len());
    for (c, &p) in clusters.iter().zip(&weights) {
        let g = pred.f_value_resolved(c)? as f64 / predicted as f64;
        a.push(c.len() as f64 / p);
        b.push(universe * g / p);
    }
    let theta = sample.theta()?;
    let (value, std) = ratio_with_std(&a, &b, theta)?;
    Ok(Estimate { value, std, n: a.len(), theta })
}

/// Ratio estimator with `A_s = C(|c_s|,2)/p_s` and `B_s = f(c_s, Ĉ)/p_s`.
pub fn recall_cluster(pred: &Clustering, sample: &ClusterSample) -> Result<Estimate> {
    let clusters = resolve_clusters(pred, sample.clusters())?;
    let weights = sample.cluster_weights();
    let mut a = Vec::with_capacity(clusters.len());
    let mut b = Vec::with_capacity(clusters.len());
    for (c, &p) in clusters.iter().zip(&weights) {
        a.push(choose2(c.len() as u64)? as f64 / p);
        b.push(pred.f_value_resolved(c)? as f64 / p);
    }
    if a.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateRatio("every sampled cluster is a singleton".into()));
    }
    let theta = sample.theta()?;
    let (value, std) = ratio_with_std(&a, &b, theta)?;
    Ok(Estimate { value, std, n: a.len(), theta })
}
