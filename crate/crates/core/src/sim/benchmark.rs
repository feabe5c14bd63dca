//! Benchmark-style evaluation of the rule-based matcher: repeatedly draw a
//! small set of records, recover their true clusters, and compare naive
//! precision on that benchmark with the size-weighted cluster_block
//! estimate.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::persons::{generate_synthetic_population, rule_based_matcher, SyntheticPersonConfig};
use super::rng::{stream, stream_id};
use super::runner::ErrorSummary;
use super::sampling::sample_clusters;
use crate::clustering::{exact_precision_recall, Clustering};
use crate::error::{Error, Result};
use crate::estimators::{estimate, naive_precision_recall, Metric, SamplingDesign, SamplingType, WeightScheme};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    /// Seed of every stream used; `stream_id([0])` builds the population,
    /// `stream_id([1, r])` draws repetition `r`.
    pub master_seed: u64,
    pub records: usize,
    pub entities: usize,
    pub predicted_clusters: usize,
    pub oracle_precision: f64,
    pub oracle_recall: f64,
    pub naive: Vec<Option<f64>>,
    pub adjusted: Vec<Option<f64>>,
    pub naive_summary: ErrorSummary,
    pub adjusted_summary: ErrorSummary,
}

pub const FIGURE1_CSV_HEADER: [&str; 4] = ["repetition", "naive", "adjusted", "oracle"];

impl BenchmarkReport {
    /// One row per repetition, ready for plotting; failures are `NA`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let err = |e: csv::Error| Error::InvalidInput(e.to_string());
        let cell = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), |v| v.to_string());
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(FIGURE1_CSV_HEADER).map_err(err)?;
        for (r, (n, a)) in self.naive.iter().zip(&self.adjusted).enumerate() {
            w.write_record([r.to_string(), cell(*n), cell(*a), self.oracle_precision.to_string()]).map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the experiment on a fresh synthetic population. A single `u64` is
/// drawn from `rng` and used as the master seed, so results do not depend
/// on the number of worker threads.
pub fn run_benchmark_bias_experiment<R: Rng + ?Sized>(
    cfg: &SyntheticPersonConfig,
    reps: usize,
    records_per_sample: usize,
    rng: &mut R,
) -> Result<BenchmarkReport> {
    let seed = rng.next_u64();
    let (records, truth) = generate_synthetic_population(cfg, &mut stream(seed, stream_id(&[0])))?;
    let pred = rule_based_matcher(&records)?;
    benchmark_on(&truth, &pred, reps, records_per_sample, seed)
}

/// The repetition loop of [`run_benchmark_bias_experiment`] for a given
/// truth and prediction.
pub fn benchmark_on(
    truth: &Clustering,
    pred: &Clustering,
    reps: usize,
    records_per_sample: usize,
    seed: u64,
) -> Result<BenchmarkReport> {
    if reps == 0 || records_per_sample == 0 {
        return Err(Error::InvalidInput("repetitions and records per sample must be positive".into()));
    }
    let (oracle_precision, oracle_recall) = exact_precision_recall(truth, pred)?;
    let pairs: Vec<(Option<f64>, Option<f64>)> = (0..reps)
        .into_par_iter()
        .map(|r| -> Result<_> {
            let mut rng = stream(seed, stream_id(&[1, r as u64]));
            let sample = sample_clusters(truth, records_per_sample, WeightScheme::ClusterSize, &mut rng)?;
            let naive = naive_precision_recall(pred, &sample).ok().map(|(p, _)| p);
            let blocks = sample.with_design(SamplingDesign::new(SamplingType::ClusterBlock, WeightScheme::ClusterSize))?;
            let adjusted = estimate(pred, &blocks, Metric::Precision).ok().map(|e| e.value);
            Ok((naive, adjusted))
        })
        .collect::<Result<_>>()?;
    let (naive, adjusted): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let oracles = vec![oracle_precision; reps];
    Ok(BenchmarkReport {
        master_seed: seed,
        records: truth.universe_size(),
        entities: truth.num_clusters(),
        predicted_clusters: pred.num_clusters(),
        oracle_precision,
        oracle_recall,
        naive_summary: ErrorSummary::new(&naive, &oracles),
        adjusted_summary: ErrorSummary::new(&adjusted, &oracles),
        naive,
        adjusted,
    })
}
