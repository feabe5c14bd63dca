//! Monte-Carlo bias/RMSE study: corrupt a ground truth, sample it, and score
//! each estimator against the exact metrics of the corrupted prediction.
//!
//! Random streams: the synthetic truth uses `stream_id([0])`, the corruption
//! for rate `i` and repetition `r` uses `stream_id([1, i, r])`, and the sample
//! of size index `j` drawn from it uses `stream_id([2, i, j, r])`, all under
//! `master_seed`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inject::inject_misattribution;
use super::population::{generate_truth, SyntheticTruthConfig};
use super::rng::{stream, stream_id};
use super::sampling::sample_clusters;
use crate::clustering::{exact_precision_recall, Clustering};
use crate::error::{Error, Result};
use crate::estimators::{
    compensated_sum, estimate, naive_precision_recall, ClusterSample, Metric, SamplingDesign, SamplingType,
    WeightScheme,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EstimatorName {
    #[serde(rename = "P_naive")]
    PNaive,
    #[serde(rename = "R_naive")]
    RNaive,
    #[serde(rename = "P_record")]
    PRecord,
    #[serde(rename = "R_record")]
    RRecord,
    #[serde(rename = "P_cluster_block")]
    PClusterBlock,
}

impl EstimatorName {
    pub const ALL: [EstimatorName; 5] = [Self::PNaive, Self::RNaive, Self::PRecord, Self::RRecord, Self::PClusterBlock];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PNaive => "P_naive",
            Self::RNaive => "R_naive",
            Self::PRecord => "P_record",
            Self::RRecord => "R_record",
            Self::PClusterBlock => "P_cluster_block",
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Self::PNaive | Self::PRecord | Self::PClusterBlock => Metric::Precision,
            Self::RNaive | Self::RRecord => Metric::Recall,
        }
    }

    /// Evaluates the estimator on a sample drawn with size-proportional
    /// cluster sampling.
    pub fn evaluate(self, pred: &Clustering, sample: &ClusterSample) -> Result<f64> {
        let redesign = |t, w| sample.with_design(SamplingDesign::new(t, w));
        match self {
            Self::PNaive => Ok(naive_precision_recall(pred, sample)?.0),
            Self::RNaive => Ok(naive_precision_recall(pred, sample)?.1),
            Self::PRecord | Self::RRecord => {
                Ok(estimate(pred, &redesign(SamplingType::Record, WeightScheme::Uniform)?, self.metric())?.value)
            }
            Self::PClusterBlock => Ok(estimate(
                pred,
                &redesign(SamplingType::ClusterBlock, WeightScheme::ClusterSize)?,
                Metric::Precision,
            )?
            .value),
        }
    }
}

impl fmt::Display for EstimatorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|e| e.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|e| e.as_str()).collect();
            Error::InvalidInput(format!("unknown estimator `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

/// Where the ground truth comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseTruth {
    Synthetic {
        mentions: usize,
        size_exponent: f64,
        max_cluster_size: usize,
    },
    /// Membership CSV; relative paths resolve against the config file.
    File { path: PathBuf },
}

impl From<SyntheticTruthConfig> for BaseTruth {
    fn from(c: SyntheticTruthConfig) -> Self {
        Self::Synthetic { mentions: c.mentions, size_exponent: c.size_exponent, max_cluster_size: c.max_cluster_size }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub schema_version: u32,
    pub base_truth: BaseTruth,
    pub misattribution_rates: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub repetitions: usize,
    pub estimators: Vec<EstimatorName>,
    pub master_seed: u64,
}

impl SimulationConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Schema(e.to_string().trim_end().to_owned()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every field and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            problems.push(format!("schema_version: expected {SCHEMA_VERSION}, found {}", self.schema_version));
        }
        if let BaseTruth::Synthetic { mentions, size_exponent, max_cluster_size } = &self.base_truth {
            let c = SyntheticTruthConfig {
                mentions: *mentions,
                size_exponent: *size_exponent,
                max_cluster_size: *max_cluster_size,
            };
            if let Err(e) = c.validate() {
                problems.push(format!("base_truth: {e}"));
            }
        }
        if self.misattribution_rates.is_empty() {
            problems.push("misattribution_rates: must not be empty".into());
        }
        for r in &self.misattribution_rates {
            if !(0.0..=1.0).contains(r) {
                problems.push(format!("misattribution_rates: {r} is outside [0, 1]"));
            }
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            problems.push("sample_sizes: must be a non-empty list of positive counts".into());
        }
        if self.repetitions == 0 {
            problems.push("repetitions: must be at least 1".into());
        }
        if self.estimators.is_empty() {
            problems.push("estimators: must not be empty".into());
        }
        let mut seen = self.estimators.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            problems.push("estimators: duplicate names".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Schema(problems.join("; ")))
        }
    }

    pub fn load_truth(&self, base_dir: &Path) -> Result<Clustering> {
        match &self.base_truth {
            &BaseTruth::Synthetic { mentions, size_exponent, max_cluster_size } => generate_truth(
                &SyntheticTruthConfig { mentions, size_exponent, max_cluster_size },
                &mut stream(self.master_seed, stream_id(&[0])),
            ),
            BaseTruth::File { path } => {
                let table = crate::io::read_membership_file(base_dir.join(path))?;
                Ok(Clustering::from_membership(&table.membership))
            }
        }
    }
}

/// Bias and RMSE of estimates against per-repetition oracle values. Failed
/// repetitions are excluded; every field is `None` when all failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub successes: usize,
    pub mean_estimate: Option<f64>,
    pub mean_oracle: Option<f64>,
    pub bias: Option<f64>,
    pub rmse: Option<f64>,
    /// Population variance of `estimate − oracle`, so `rmse² = bias² + error_variance`.
    pub error_variance: Option<f64>,
}

impl ErrorSummary {
    pub fn new(estimates: &[Option<f64>], oracles: &[f64]) -> Self {
        let pairs: Vec<(f64, f64)> =
            estimates.iter().zip(oracles).filter_map(|(e, &o)| e.map(|e| (e, o))).collect();
        if pairs.is_empty() {
            return Self { successes: 0, mean_estimate: None, mean_oracle: None, bias: None, rmse: None, error_variance: None };
        }
        let n = pairs.len() as f64;
        let mean = |xs: &mut dyn Iterator<Item = f64>| compensated_sum(xs) / n;
        let bias = mean(&mut pairs.iter().map(|(e, o)| e - o));
        let mse = mean(&mut pairs.iter().map(|(e, o)| (e - o) * (e - o)));
        let var = mean(&mut pairs.iter().map(|(e, o)| (e - o - bias) * (e - o - bias)));
        Self {
            successes: pairs.len(),
            mean_estimate: Some(mean(&mut pairs.iter().map(|p| p.0))),
            mean_oracle: Some(mean(&mut pairs.iter().map(|p| p.1))),
            bias: Some(bias),
            rmse: Some(mse.sqrt()),
            error_variance: Some(var),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportCell {
    pub estimator: EstimatorName,
    pub rate: f64,
    pub sample_size: usize,
    #[serde(flatten)]
    pub summary: ErrorSummary,
    /// One entry per repetition; `None` where the estimator failed.
    pub estimates: Vec<Option<f64>>,
    pub oracles: Vec<f64>,
    /// Failed repetitions by error kind.
    pub failures: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruthSummary {
    pub mentions: usize,
    pub clusters: usize,
    pub true_pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: SimulationConfig,
    pub truth: TruthSummary,
    /// Ordered by estimator (config order), then rate, then sample size.
    pub cells: Vec<ReportCell>,
}

pub const REPORT_CSV_HEADER: [&str; 11] = [
    "estimator",
    "rate",
    "sample_size",
    "repetitions",
    "successes",
    "mean_estimate",
    "mean_oracle",
    "bias",
    "rmse",
    "error_variance",
    "failures",
];

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), |v| v.to_string())
}

impl SimulationReport {
    pub fn cell(&self, estimator: EstimatorName, rate: f64, sample_size: usize) -> Option<&ReportCell> {
        self.cells.iter().find(|c| c.estimator == estimator && c.rate == rate && c.sample_size == sample_size)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let err = |e: csv::Error| Error::InvalidInput(e.to_string());
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(REPORT_CSV_HEADER).map_err(err)?;
        for c in &self.cells {
            let failures: Vec<String> = c.failures.iter().map(|(k, n)| format!("{k}:{n}")).collect();
            w.write_record([
                c.estimator.as_str().to_owned(),
                c.rate.to_string(),
                c.sample_size.to_string(),
                c.estimates.len().to_string(),
                c.summary.successes.to_string(),
                opt(c.summary.mean_estimate),
                opt(c.summary.mean_oracle),
                opt(c.summary.bias),
                opt(c.summary.rmse),
                opt(c.summary.error_variance),
                failures.join(";"),
            ])
            .map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, self).map_err(|e| Error::InvalidInput(e.to_string()))?;
        writeln!(writer)?;
        Ok(())
    }
}

type Outcome = std::result::Result<f64, &'static str>;

struct RepetitionResult {
    oracle: (f64, f64),
    /// Indexed by sample size, then estimator.
    outcomes: Vec<Vec<Outcome>>,
}

fn repetition(cfg: &SimulationConfig, truth: &Clustering, ri: usize, r: usize) -> Result<RepetitionResult> {
    let rate = cfg.misattribution_rates[ri];
    let pred = inject_misattribution(truth, rate, &mut stream(cfg.master_seed, stream_id(&[1, ri as u64, r as u64])))?;
    let oracle = exact_precision_recall(truth, &pred)?;
    let mut outcomes = Vec::with_capacity(cfg.sample_sizes.len());
    for (si, &n) in cfg.sample_sizes.iter().enumerate() {
        let mut rng = stream(cfg.master_seed, stream_id(&[2, ri as u64, si as u64, r as u64]));
        let sample = sample_clusters(truth, n, WeightScheme::ClusterSize, &mut rng)?;
        outcomes.push(cfg.estimators.iter().map(|e| e.evaluate(&pred, &sample).map_err(|e| e.kind())).collect());
    }
    Ok(RepetitionResult { oracle, outcomes })
}

/// Runs the study on the current rayon pool. The report does not depend on
/// the number of threads.
pub fn run_simulation_on(cfg: &SimulationConfig, truth: &Clustering) -> Result<SimulationReport> {
    cfg.validate()?;
    let reps = cfg.repetitions;
    let jobs: Vec<(usize, usize)> =
        (0..cfg.misattribution_rates.len()).flat_map(|ri| (0..reps).map(move |r| (ri, r))).collect();
    let results: Vec<RepetitionResult> = jobs
        .par_iter()
        .map(|&(ri, r)| repetition(cfg, truth, ri, r))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for (ei, &estimator) in cfg.estimators.iter().enumerate() {
        for (ri, &rate) in cfg.misattribution_rates.iter().enumerate() {
            let runs = &results[ri * reps..(ri + 1) * reps];
            let oracles: Vec<f64> = runs
                .iter()
                .map(|run| match estimator.metric() {
                    Metric::Precision => run.oracle.0,
                    Metric::Recall => run.oracle.1,
                })
                .collect();
            for (si, &sample_size) in cfg.sample_sizes.iter().enumerate() {
                let mut failures = BTreeMap::new();
                let estimates: Vec<Option<f64>> = runs
                    .iter()
                    .map(|run| match run.outcomes[si][ei] {
                        Ok(v) => Some(v),
                        Err(kind) => {
                            *failures.entry(kind.to_owned()).or_insert(0) += 1;
                            None
                        }
                    })
                    .collect();
                cells.push(ReportCell {
                    estimator,
                    rate,
                    sample_size,
                    summary: ErrorSummary::new(&estimates, &oracles),
                    estimates,
                    oracles: oracles.clone(),
                    failures,
                });
            }
        }
    }
    Ok(SimulationReport {
        schema_version: SCHEMA_VERSION,
        tool_version: crate::VERSION,
        config: cfg.clone(),
        truth: TruthSummary {
            mentions: truth.universe_size(),
            clusters: truth.num_clusters(),
            true_pairs: truth.pair_count()?,
        },
        cells,
    })
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = rayon's default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run_simulation_threads(cfg: &SimulationConfig, truth: &Clustering, threads: usize) -> Result<SimulationReport> {
    with_threads(threads, || run_simulation_on(cfg, truth))?
}

/// Loads the configured truth (files relative to the working directory)
/// and runs the study.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let truth = cfg.load_truth(Path::new("."))?;
    run_simulation_on(cfg, &truth)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub oracle: f64,
    pub level: f64,
    pub repetitions: usize,
    pub covered: usize,
    pub failures: usize,
    /// Fraction of successful repetitions whose interval contains the oracle.
    pub coverage: f64,
}

/// Interval coverage of size-weighted cluster_block precision for a fixed
/// prediction, over `repetitions` independent samples of `sample_size`
/// record draws.
pub fn run_coverage_experiment(
    truth: &Clustering,
    pred: &Clustering,
    sample_size: usize,
    repetitions: usize,
    level: f64,
    seed: u64,
) -> Result<CoverageReport> {
    let (oracle, _) = exact_precision_recall(truth, pred)?;
    let hits: Vec<Option<bool>> = (0..repetitions)
        .into_par_iter()
        .map(|r| -> Result<Option<bool>> {
            let sample = sample_clusters(truth, sample_size, WeightScheme::ClusterSize, &mut stream(seed, stream_id(&[3, r as u64])))?
                .with_design(SamplingDesign::new(SamplingType::ClusterBlock, WeightScheme::ClusterSize))?;
            Ok(estimate(pred, &sample, Metric::Precision)
                .ok()
                .and_then(|e| e.interval(level))
                .map(|(lo, hi)| lo <= oracle && oracle <= hi))
        })
        .collect::<Result<_>>()?;
    let covered = hits.iter().filter(|h| **h == Some(true)).count();
    let failures = hits.iter().filter(|h| h.is_none()).count();
    Ok(CoverageReport {
        oracle,
        level,
        repetitions,
        covered,
        failures,
        coverage: covered as f64 / (repetitions - failures).max(1) as f64,
    })
}
