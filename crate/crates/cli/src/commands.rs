use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use clusterwise::estimators::Weights;
use clusterwise::io::{read_membership_file, write_membership_file, MembershipTable};
use clusterwise::sim::{
    self, benchmark_on, generate_synthetic_population, rule_based_matcher, stream, stream_id, write_attributes,
    BenchmarkReport, SimulationConfig, SimulationReport,
};
use clusterwise::{
    estimate_with, pair_stats, ClusterSample, Clustering, Error, Estimate, EstimateOptions, Metric, Result,
    SamplingDesign, SamplingType, WeightScheme,
};

use crate::config::{read_toml, Figure1Config, SynthConfig};
use crate::manifest::RunManifest;

/// Version of the JSON and CSV layouts written by the commands.
pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

fn json_err(e: serde_json::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(json_err)
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(json_err)?;
    writeln!(out)?;
    Ok(())
}

fn read_table(path: &Path, manifest: &mut RunManifest) -> Result<MembershipTable> {
    let table = read_membership_file(path).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", path.display()) },
        other => other,
    })?;
    manifest.input(path)?;
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct ExactArgs {
    pub truth: PathBuf,
    pub pred: PathBuf,
    pub json: bool,
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactReport {
    pub schema_version: u32,
    pub precision: f64,
    pub recall: f64,
    pub matching_pairs: u64,
    pub predicted_pairs: u64,
    pub common_pairs: u64,
}

#[derive(Serialize)]
struct WithManifest<'a, T: Serialize> {
    #[serde(flatten)]
    result: &'a T,
    manifest: &'a RunManifest,
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    result: &T,
    manifest: RunManifest,
    json: bool,
    manifest_path: Option<&Path>,
    human: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    let manifest = manifest.finish();
    if let Some(p) = manifest_path {
        manifest.write(p)?;
    }
    if json {
        print_json(out, &WithManifest { result, manifest: &manifest })
    } else {
        Ok(human(out)?)
    }
}

pub fn cmd_exact(args: &ExactArgs, out: &mut dyn Write) -> Result<ExactReport> {
    let mut manifest = RunManifest::start("exact", serde_json::json!({}), None);
    let truth = Clustering::from_membership(&read_table(&args.truth, &mut manifest)?.membership);
    let pred = Clustering::from_membership(&read_table(&args.pred, &mut manifest)?.membership);
    let stats = pair_stats(&truth, &pred)?;
    let report = ExactReport {
        schema_version: OUTPUT_SCHEMA_VERSION,
        precision: stats.precision()?,
        recall: stats.recall()?,
        matching_pairs: stats.matching_pairs,
        predicted_pairs: stats.predicted_pairs,
        common_pairs: stats.common_pairs,
    };
    emit(out, &report, manifest, args.json, args.manifest.as_deref(), |out| {
        writeln!(out, "precision  {}", report.precision)?;
        writeln!(out, "recall     {}", report.recall)?;
        writeln!(out, "|T|        {}", report.matching_pairs)?;
        writeln!(out, "|P|        {}", report.predicted_pairs)?;
        writeln!(out, "|T∩P|      {}", report.common_pairs)
    })?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct EstimateArgs {
    pub pred: PathBuf,
    pub sample: PathBuf,
    pub sampling_type: String,
    pub weights: String,
    pub metric: String,
    pub fpc: Option<u64>,
    pub clamp: bool,
    pub level: f64,
    pub allow_missing: bool,
    pub json: bool,
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub metric: Metric,
    pub sampling_type: SamplingType,
    /// `uniform`, `cluster_size`, or `explicit` when the sample carries a
    /// weight column.
    pub weights: String,
    pub value: f64,
    pub std: Option<f64>,
    pub n: usize,
    pub theta: f64,
    pub level: f64,
    pub interval_low: Option<f64>,
    pub interval_high: Option<f64>,
    /// Sample mentions dropped by `--allow-missing`.
    pub dropped_mentions: usize,
}

fn na(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), |v| v.to_string())
}

pub fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<EstimateReport> {
    let sampling_type: SamplingType = args.sampling_type.parse()?;
    let scheme: WeightScheme = args.weights.parse()?;
    let metric: Metric = args.metric.parse()?;
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(Error::InvalidInput(format!("confidence level {} must be in (0, 1)", args.level)));
    }
    let config = serde_json::json!({
        "sampling_type": sampling_type,
        "weights": scheme,
        "metric": metric,
        "fpc": args.fpc,
        "clamp": args.clamp,
        "level": args.level,
        "allow_missing": args.allow_missing,
    });
    let mut manifest = RunManifest::start("estimate", config, None);
    let pred = Clustering::from_membership(&read_table(&args.pred, &mut manifest)?.membership);
    let table = read_table(&args.sample, &mut manifest)?;

    let explicit = table.cluster_weights();
    let mut clusters = Vec::new();
    let mut kept_weights = Vec::new();
    let mut dropped = 0;
    for (k, mut cluster) in table.membership.groups().into_iter().enumerate() {
        if args.allow_missing {
            let before = cluster.len();
            cluster.retain(|m| pred.mention_index(m).is_some());
            dropped += before - cluster.len();
            if cluster.is_empty() {
                continue;
            }
        }
        clusters.push(cluster);
        if let Some(w) = &explicit {
            kept_weights.push(w[k]);
        }
    }
    if clusters.is_empty() {
        return Err(Error::InvalidInput("no sampled mention is present in the prediction".into()));
    }
    let weights = match explicit {
        Some(_) => Weights::Explicit(kept_weights),
        None => Weights::Scheme(scheme),
    };
    let mut design = SamplingDesign::new(sampling_type, weights);
    if let Some(t) = args.fpc {
        design = design.with_fpc(t);
    }
    let sample = ClusterSample::new(clusters, design)?;
    let est: Estimate = estimate_with(&pred, &sample, metric, EstimateOptions { clamp: args.clamp })?;
    let interval = est.interval(args.level);
    let report = EstimateReport {
        schema_version: OUTPUT_SCHEMA_VERSION,
        metric,
        sampling_type,
        weights: if explicit_weights(&sample) { "explicit".into() } else { scheme.to_string() },
        value: est.value,
        std: est.std,
        n: est.n,
        theta: est.theta,
        level: args.level,
        interval_low: interval.map(|i| i.0),
        interval_high: interval.map(|i| i.1),
        dropped_mentions: dropped,
    };
    emit(out, &report, manifest, args.json, args.manifest.as_deref(), |out| {
        writeln!(out, "metric         {}", report.metric)?;
        writeln!(out, "sampling_type  {}", report.sampling_type)?;
        writeln!(out, "weights        {}", report.weights)?;
        writeln!(out, "value          {}", report.value)?;
        writeln!(out, "std            {}", na(report.std))?;
        writeln!(out, "n              {}", report.n)?;
        writeln!(out, "theta          {}", report.theta)?;
        match interval {
            Some((lo, hi)) => writeln!(out, "interval       [{lo}, {hi}] ({}%)", report.level * 100.0)?,
            None => writeln!(out, "interval       NA")?,
        }
        if args.allow_missing {
            writeln!(out, "dropped        {}", report.dropped_mentions)?;
        }
        Ok(())
    })?;
    Ok(report)
}

fn explicit_weights(sample: &ClusterSample) -> bool {
    matches!(sample.design().weights, Weights::Explicit(_))
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    /// Worker threads; 0 picks one per core.
    pub threads: usize,
}

pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_JSON: &str = "report.json";
pub const MANIFEST_JSON: &str = "manifest.json";

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<SimulationReport> {
    let cfg = SimulationConfig::from_toml_str(&fs::read_to_string(&args.config)?)?;
    let mut manifest = RunManifest::start("simulate", to_json(&cfg)?, Some(cfg.master_seed));
    manifest.input(&args.config)?;
    let base_dir = args.config.parent().unwrap_or(Path::new("."));
    if let sim::BaseTruth::File { path } = &cfg.base_truth {
        manifest.input(&base_dir.join(path))?;
    }
    let truth = cfg.load_truth(base_dir)?;
    let report = sim::run_simulation_threads(&cfg, &truth, args.threads)?;

    fs::create_dir_all(&args.out_dir)?;
    let csv_path = args.out_dir.join(REPORT_CSV);
    report.write_csv(fs::File::create(&csv_path)?)?;
    let json_path = args.out_dir.join(REPORT_JSON);
    report.write_json(fs::File::create(&json_path)?)?;
    manifest.output(&csv_path)?;
    manifest.output(&json_path)?;
    manifest.finish().write(&args.out_dir.join(MANIFEST_JSON))?;
    writeln!(
        out,
        "{} cells, {} repetitions each, written to {}",
        report.cells.len(),
        cfg.repetitions,
        args.out_dir.display()
    )?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct SynthArgs {
    pub config: PathBuf,
    pub out_prefix: PathBuf,
}

pub fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Paths written by `synth` for a prefix.
pub fn synth_outputs(prefix: &Path) -> [PathBuf; 4] {
    ["_attributes.csv", "_truth.csv", "_pred.csv", "_manifest.json"].map(|s| prefixed(prefix, s))
}

/// Writes the attribute table, the true membership, the rule-based matcher's
/// membership and a manifest. The population is drawn from
/// `stream(master_seed, stream_id([0]))`, as in `figure1`.
pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<RunManifest> {
    let cfg: SynthConfig = read_toml(&args.config)?;
    cfg.validate()?;
    let mut manifest = RunManifest::start("synth", to_json(&cfg)?, Some(cfg.master_seed));
    manifest.input(&args.config)?;
    let (records, truth) =
        generate_synthetic_population(&cfg.population, &mut stream(cfg.master_seed, stream_id(&[0])))?;
    let pred = rule_based_matcher(&records)?;

    let [attrs, truth_path, pred_path, manifest_path] = synth_outputs(&args.out_prefix);
    if let Some(dir) = attrs.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_attributes(fs::File::create(&attrs)?, &records)?;
    write_membership_file(&truth_path, &truth.to_membership())?;
    write_membership_file(&pred_path, &pred.to_membership())?;
    for p in [&attrs, &truth_path, &pred_path] {
        manifest.output(p)?;
    }
    let manifest = manifest.finish();
    manifest.write(&manifest_path)?;
    writeln!(
        out,
        "{} records, {} entities, {} predicted clusters",
        records.len(),
        truth.num_clusters(),
        pred.num_clusters()
    )?;
    Ok(manifest)
}

#[derive(Debug, Clone)]
pub struct Figure1Args {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    pub threads: usize,
}

pub const FIGURE1_CSV: &str = "figure1.csv";
pub const FIGURE1_JSON: &str = "figure1.json";

#[derive(Serialize)]
struct Figure1Summary<'a> {
    schema_version: u32,
    records: usize,
    entities: usize,
    predicted_clusters: usize,
    oracle_precision: f64,
    oracle_recall: f64,
    naive: &'a sim::ErrorSummary,
    adjusted: &'a sim::ErrorSummary,
}

/// Naive and size-weighted cluster_block precision over repeated record
/// samples from the synthetic population and its rule-based matching.
pub fn cmd_figure1(args: &Figure1Args, out: &mut dyn Write) -> Result<BenchmarkReport> {
    let cfg: Figure1Config = read_toml(&args.config)?;
    cfg.validate()?;
    let mut manifest = RunManifest::start("figure1", to_json(&cfg)?, Some(cfg.master_seed));
    manifest.input(&args.config)?;
    let (records, truth) =
        generate_synthetic_population(&cfg.population, &mut stream(cfg.master_seed, stream_id(&[0])))?;
    let pred = rule_based_matcher(&records)?;
    let report = sim::runner::with_threads(args.threads, || {
        benchmark_on(&truth, &pred, cfg.repetitions, cfg.records_per_sample, cfg.master_seed)
    })??;

    fs::create_dir_all(&args.out_dir)?;
    let csv_path = args.out_dir.join(FIGURE1_CSV);
    report.write_csv(fs::File::create(&csv_path)?)?;
    let json_path = args.out_dir.join(FIGURE1_JSON);
    let summary = Figure1Summary {
        schema_version: OUTPUT_SCHEMA_VERSION,
        records: report.records,
        entities: report.entities,
        predicted_clusters: report.predicted_clusters,
        oracle_precision: report.oracle_precision,
        oracle_recall: report.oracle_recall,
        naive: &report.naive_summary,
        adjusted: &report.adjusted_summary,
    };
    fs::write(&json_path, serde_json::to_string_pretty(&summary).map_err(json_err)? + "\n")?;
    manifest.output(&csv_path)?;
    manifest.output(&json_path)?;
    manifest.finish().write(&args.out_dir.join(MANIFEST_JSON))?;

    writeln!(out, "oracle precision {:.4}, recall {:.4}", report.oracle_precision, report.oracle_recall)?;
    for (name, s) in [("naive", &report.naive_summary), ("adjusted", &report.adjusted_summary)] {
        writeln!(
            out,
            "{name:<9} bias {:+.4}  rmse {:.4}  ({} of {} repetitions)",
            s.bias.unwrap_or(f64::NAN),
            s.rmse.unwrap_or(f64::NAN),
            s.successes,
            cfg.repetitions
        )?;
    }
    Ok(report)
}
