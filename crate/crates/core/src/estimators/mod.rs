//! Precision and recall estimators for samples of ground-truth clusters.
//!
//! Each sampling design has its own pair of estimators:
//!
//! | design          | precision               | recall            |
//! |-----------------|-------------------------|-------------------|
//! | `record`        | [`precision_record`]    | [`recall_record`] |
//! | `cluster`       | [`precision_cluster`]   | [`recall_cluster`] |
//! | `cluster_block` | [`precision_block`], one block per cluster | [`recall_cluster`] |
//! | `single_block`  | [`precision_block`], one block  | [`recall_block`] |
//!
//! [`estimate`] dispatches on a [`SamplingDesign`].

mod block;
mod cluster;
mod naive;
mod ratio;
mod record;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::clustering::{Clustering, MembershipVector};
use crate::error::{Error, Result};

pub use block::{precision_block, recall_block};
pub use cluster::{precision_cluster, recall_cluster};
pub use naive::{naive_pair_stats, naive_precision_recall};
pub use ratio::{compensated_sum, fpc_theta, ratio_estimate, ratio_variance, CompensatedSum};
pub use record::{precision_record, recall_record};

/// How the ground-truth clusters were drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingType {
    /// Records drawn with probabilities `p_i`; each brings its whole cluster.
    Record,
    /// Clusters drawn with probabilities proportional to `p_c`.
    Cluster,
    /// Cluster sampling, with each sampled cluster treated as its own block.
    ClusterBlock,
    /// A single block, containing every sampled cluster.
    SingleBlock,
}

impl SamplingType {
    pub const ALL: [SamplingType; 4] = [Self::Record, Self::Cluster, Self::ClusterBlock, Self::SingleBlock];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Record => "record",
            Self::Cluster => "cluster",
            Self::ClusterBlock => "cluster_block",
            Self::SingleBlock => "single_block",
        }
    }
}

impl fmt::Display for SamplingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplingType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| {
            Error::InvalidDesign(format!(
                "unknown sampling_type `{s}`; expected one of \"record\", \"cluster\", \"cluster_block\", \"single_block\""
            ))
        })
    }
}

/// Named sampling weight schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    Uniform,
    /// Probability proportional to cluster size.
    ClusterSize,
}

impl WeightScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::ClusterSize => "cluster_size",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "cluster_size" => Ok(Self::ClusterSize),
            _ => Err(Error::InvalidDesign(format!(
                "unknown weights `{s}`; expected one of \"uniform\", \"cluster_size\""
            ))),
        }
    }
}

/// Sampling probabilities, by scheme or given per sampled cluster.
///
/// Explicit values for `record` precision must be the actual record
/// probabilities `p_i`; everywhere else they only matter up to a common
/// factor.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Scheme(WeightScheme),
    Explicit(Vec<f64>),
}

impl From<WeightScheme> for Weights {
    fn from(s: WeightScheme) -> Self {
        Self::Scheme(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingDesign {
    pub sampling_type: SamplingType,
    pub weights: Weights,
    /// Population size `T` for the finite-population correction.
    pub fpc: Option<u64>,
}

impl SamplingDesign {
    pub fn new(sampling_type: SamplingType, weights: impl Into<Weights>) -> Self {
        Self { sampling_type, weights: weights.into(), fpc: None }
    }

    /// Parses the design strings, e.g. `("cluster_block", "cluster_size")`.
    pub fn parse(sampling_type: &str, weights: &str) -> Result<Self> {
        Ok(Self::new(sampling_type.parse()?, weights.parse::<WeightScheme>()?))
    }

    pub fn with_fpc(mut self, population: u64) -> Self {
        self.fpc = Some(population);
        self
    }
}

/// Fully resolved ground-truth clusters and the design they were drawn under.
/// Clusters drawn more than once appear once per draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSample {
    clusters: Vec<Vec<String>>,
    design: SamplingDesign,
}

impl ClusterSample {
    pub fn new(clusters: Vec<Vec<String>>, design: SamplingDesign) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::InvalidInput("sample has no clusters".into()));
        }
        if clusters.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInput("sample contains an empty cluster".into()));
        }
        if let Weights::Explicit(p) = &design.weights {
            if p.len() != clusters.len() {
                return Err(Error::InvalidDesign(format!(
                    "{} explicit probabilities for {} sampled clusters",
                    p.len(),
                    clusters.len()
                )));
            }
            if let Some(bad) = p.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::InvalidDesign(format!("sampling probability {bad} is not positive")));
            }
        }
        Ok(Self { clusters, design })
    }

    /// One sampled cluster per distinct cluster id, in cluster-id order.
    pub fn from_membership(mv: &MembershipVector, design: SamplingDesign) -> Result<Self> {
        Self::new(mv.groups(), design)
    }

    pub fn clusters(&self) -> &[Vec<String>] {
        &self.clusters
    }

    /// The same clusters evaluated under another design.
    pub fn with_design(&self, design: SamplingDesign) -> Result<Self> {
        Self::new(self.clusters.clone(), design)
    }

    pub fn design(&self) -> &SamplingDesign {
        &self.design
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Per-cluster weights known up to proportionality.
    pub(crate) fn cluster_weights(&self) -> Vec<f64> {
        match &self.design.weights {
            Weights::Scheme(WeightScheme::Uniform) => vec![1.0; self.len()],
            Weights::Scheme(WeightScheme::ClusterSize) => self.clusters.iter().map(|c| c.len() as f64).collect(),
            Weights::Explicit(p) => p.clone(),
        }
    }

    pub(crate) fn theta(&self) -> Result<f64> {
        fpc_theta(self.len(), self.design.fpc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Precision,
    Recall,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "precision" => Ok(Self::Precision),
            "recall" => Ok(Self::Recall),
            _ => Err(Error::InvalidDesign(format!(
                "unknown metric `{s}`; expected \"precision\" or \"recall\""
            ))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Precision => "precision",
            Self::Recall => "recall",
        })
    }
}

/// A point estimate with its estimated standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// `None` for single-sample designs, where no variance can be estimated.
    pub std: Option<f64>,
    pub n: usize,
    pub theta: f64,
}

impl Estimate {
    /// Normal-approximation interval at `level` (e.g. 0.95).
    pub fn interval(&self, level: f64) -> Option<(f64, f64)> {
        let std = self.std?;
        let z = Normal::new(0.0, 1.0).ok()?.inverse_cdf(0.5 + level / 2.0);
        Some((self.value - z * std, self.value + z * std))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EstimateOptions {
    /// Clamp the point estimate into `[0, 1]`. Off by default: clamping the
    /// unbiased record-sampling precision biases it downwards.
    pub clamp: bool,
}

/// Estimates `metric` for `pred` with the estimator matching the sample's
/// design.
pub fn estimate(pred: &Clustering, sample: &ClusterSample, metric: Metric) -> Result<Estimate> {
    estimate_with(pred, sample, metric, EstimateOptions::default())
}

pub fn estimate_with(
    pred: &Clustering,
    sample: &ClusterSample,
    metric: Metric,
    options: EstimateOptions,
) -> Result<Estimate> {
    use Metric::*;
    use SamplingType::*;
    let mut est = match (sample.design.sampling_type, metric) {
        (Record, Precision) => precision_record(pred, sample)?,
        (Record, Recall) => recall_record(pred, sample)?,
        (Cluster, Precision) => precision_cluster(pred, sample)?,
        (Cluster | ClusterBlock, Recall) => recall_cluster(pred, sample)?,
        (ClusterBlock, Precision) => {
            let blocks: Vec<Vec<Vec<String>>> = sample.clusters.iter().map(|c| vec![c.clone()]).collect();
            precision_block(pred, &blocks, &sample.cluster_weights(), sample.design.fpc)?
        }
        (SingleBlock, Precision) => precision_block(pred, &[sample.clusters.clone()], &[1.0], None)?,
        (SingleBlock, Recall) => recall_block(pred, &[sample.clusters.clone()], &[1.0], None)?,
    };
    if options.clamp {
        est.value = est.value.clamp(0.0, 1.0);
    }
    Ok(est)
}

/// Estimator entry point on membership vectors and design strings, the shape
/// used by scripting front ends.
pub fn pairwise_estimator(
    prediction: &MembershipVector,
    sample: &MembershipVector,
    sampling_type: &str,
    weights: &str,
    metric: Metric,
) -> Result<Estimate> {
    let design = SamplingDesign::parse(sampling_type, weights)?;
    let sample = ClusterSample::from_membership(sample, design)?;
    estimate(&Clustering::from_membership(prediction), &sample, metric)
}

pub fn pairwise_precision_estimator(
    prediction: &MembershipVector,
    sample: &MembershipVector,
    sampling_type: &str,
    weights: &str,
) -> Result<Estimate> {
    pairwise_estimator(prediction, sample, sampling_type, weights, Metric::Precision)
}

pub fn pairwise_recall_estimator(
    prediction: &MembershipVector,
    sample: &MembershipVector,
    sampling_type: &str,
    weights: &str,
) -> Result<Estimate> {
    pairwise_estimator(prediction, sample, sampling_type, weights, Metric::Recall)
}

/// Sampled clusters resolved against the prediction's universe.
pub(crate) fn resolve_clusters<S: AsRef<str>>(pred: &Clustering, clusters: &[Vec<S>]) -> Result<Vec<Vec<u32>>> {
    clusters.iter().map(|c| pred.resolve(c)).collect()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn design_strings_round_trip() {
        for t in SamplingType::ALL {
            assert_eq!(t.as_str().parse::<SamplingType>().unwrap(), t);
        }
        let err = "clusters".parse::<SamplingType>().unwrap_err().to_string();
        for valid in ["record", "cluster", "cluster_block", "single_block"] {
            assert!(err.contains(valid));
        }
        assert!(matches!("size".parse::<WeightScheme>(), Err(Error::InvalidDesign(_))));
    }

    #[test]
    fn explicit_weights_validated() {
        let c = vec![vec!["1".to_string()], vec!["2".to_string()]];
        let d = |p: Vec<f64>| SamplingDesign::new(SamplingType::Cluster, Weights::Explicit(p));
        assert!(ClusterSample::new(c.clone(), d(vec![1.0])).is_err());
        assert!(ClusterSample::new(c.clone(), d(vec![1.0, 0.0])).is_err());
        assert!(ClusterSample::new(c.clone(), d(vec![1.0, f64::NAN])).is_err());
        assert!(ClusterSample::new(c, d(vec![1.0, 2.0])).is_ok());
        assert!(ClusterSample::new(vec![vec![]], SamplingDesign::new(SamplingType::Cluster, WeightScheme::Uniform)).is_err());
    }

    #[test]
    fn dispatch_cluster_block_census_on_eight_mentions() {
        let (truth, pred) = eight_mentions();
        let uniform = census(&truth, SamplingDesign::parse("cluster_block", "uniform").unwrap().with_fpc(4));
        assert_relative_eq!(estimate(&pred, &uniform, Metric::Precision).unwrap().value, 0.4, epsilon = 1e-12);
        let design = SamplingDesign::parse("cluster_block", "cluster_size").unwrap().with_fpc(8);
        let size_census = record_census(&truth, design);
        assert_relative_eq!(estimate(&pred, &size_census, Metric::Precision).unwrap().value, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn perfect_prediction_scores_one() {
        // Record and cluster precision are generic mean estimators that only
        // equal 1 in expectation; the block and recall estimators are exact.
        let (truth, _) = eight_mentions();
        let samples = [
            vec![truth.cluster_members(0), truth.cluster_members(2)],
            vec![truth.cluster_members(0), truth.cluster_members(1), truth.cluster_members(3)],
        ];
        for t in SamplingType::ALL {
            for w in [WeightScheme::Uniform, WeightScheme::ClusterSize] {
                for clusters in &samples {
                    let sample = ClusterSample::new(clusters.clone(), SamplingDesign::new(t, w)).unwrap();
                    assert_relative_eq!(estimate(&truth, &sample, Metric::Recall).unwrap().value, 1.0, epsilon = 1e-12);
                    if matches!(t, SamplingType::ClusterBlock | SamplingType::SingleBlock) {
                        assert_eq!(estimate(&truth, &sample, Metric::Precision).unwrap().value, 1.0);
                    }
                }
            }
        }
    }

    #[test]
    fn single_block_has_no_std() {
        let (truth, pred) = eight_mentions();
        let sample = census(&truth, SamplingDesign::parse("single_block", "uniform").unwrap());
        let e = estimate(&pred, &sample, Metric::Precision).unwrap();
        assert_eq!(e.n, 1);
        assert_eq!(e.std, None);
        assert_eq!(e.interval(0.95), None);
        assert_relative_eq!(e.value, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn clamp_is_opt_in() {
        let truth = Clustering::from_groups(&[vec!["1", "2", "3", "4", "5", "6", "7"], vec!["8"]]).unwrap();
        let pred = Clustering::from_groups(&[vec!["1", "2"], vec!["3"], vec!["4"], vec!["5"], vec!["6"], vec!["7"], vec!["8"]]).unwrap();
        let sample = ClusterSample::new(vec![truth.cluster_members(0); 2], SamplingDesign::parse("record", "uniform").unwrap()).unwrap();
        // g = 1, |c| = 7, p = 1/8
        let raw = estimate(&pred, &sample, Metric::Precision).unwrap();
        assert_relative_eq!(raw.value, 8.0 / 7.0, epsilon = 1e-12);
        let clamped = estimate_with(&pred, &sample, Metric::Precision, EstimateOptions { clamp: true }).unwrap();
        assert_eq!(clamped.value, 1.0);
        assert_eq!(clamped.std, raw.std);
    }

    #[test]
    fn interval_is_symmetric_normal() {
        let e = Estimate { value: 0.5, std: Some(0.1), n: 10, theta: 1.0 };
        let (lo, hi) = e.interval(0.95).unwrap();
        assert_relative_eq!(hi - 0.5, 0.1 * 1.959963984540054, epsilon = 1e-9);
        assert_relative_eq!(0.5 - lo, hi - 0.5, epsilon = 1e-15);
    }

    #[test]
    fn membership_entry_point() {
        let (truth, pred) = eight_mentions();
        let e = pairwise_precision_estimator(&pred.to_membership(), &truth.to_membership(), "single_block", "uniform").unwrap();
        assert_relative_eq!(e.value, 0.4, epsilon = 1e-12);
        let e = pairwise_recall_estimator(&pred.to_membership(), &truth.to_membership(), "cluster", "uniform").unwrap();
        assert!(e.value > 0.0);
        assert!(matches!(
            pairwise_precision_estimator(&pred.to_membership(), &truth.to_membership(), "block", "uniform"),
            Err(Error::InvalidDesign(_))
        ));
    }
}
