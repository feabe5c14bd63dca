//! The `clusterwise` command-line tool.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 invalid sampling design,
//! 4 degenerate estimate, 5 internal error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use clusterwise::Error;

pub mod commands;
pub mod config;
pub mod manifest;

pub use commands::*;
pub use manifest::RunManifest;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DESIGN: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DuplicateMention(_)
        | Error::EmptyClusterId(_)
        | Error::UniverseMismatch(_)
        | Error::UnknownMention(_)
        | Error::InvalidInput(_)
        | Error::Schema(_)
        | Error::Parse { .. }
        | Error::Io(_) => EXIT_INPUT,
        Error::InvalidDesign(_) | Error::InsufficientSample(_) => EXIT_DESIGN,
        Error::NoPredictedLinks | Error::NoTrueLinks | Error::DegenerateRatio(_) => EXIT_DEGENERATE,
        Error::Overflow => EXIT_INTERNAL,
    }
}

#[derive(Debug, Parser)]
#[command(name = "clusterwise", version, about = "Pairwise precision and recall from sampled ground-truth clusters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact pairwise precision and recall of a prediction against a full truth.
    Exact {
        truth: PathBuf,
        pred: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Estimate precision or recall from a sample of ground-truth clusters.
    Estimate {
        pred: PathBuf,
        sample: PathBuf,
        /// record, cluster, cluster_block or single_block
        #[arg(long)]
        sampling_type: String,
        /// uniform or cluster_size; ignored when the sample has a weight column
        #[arg(long, default_value = "uniform")]
        weights: String,
        /// precision or recall
        #[arg(long, default_value = "precision")]
        metric: String,
        /// Population size for the finite-population correction
        #[arg(long)]
        fpc: Option<u64>,
        /// Clamp the estimate into [0, 1]
        #[arg(long)]
        clamp: bool,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// Drop sample mentions that are absent from the prediction
        #[arg(long)]
        allow_missing: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the misattribution simulation study.
    Simulate {
        config: PathBuf,
        out_dir: PathBuf,
        /// Worker threads (0 = one per core); results do not depend on it
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Generate a synthetic person dataset with its truth and matcher output.
    Synth { config: PathBuf, out_prefix: PathBuf },
    /// Naive vs adjusted precision over repeated benchmark samples.
    Figure1 {
        config: PathBuf,
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Debug, Args)]
pub struct OutputOpts {
    /// Print JSON, including the run manifest
    #[arg(long)]
    pub json: bool,
    /// Also write the run manifest to this file
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> clusterwise::Result<()> {
    match cli.command {
        Command::Exact { truth, pred, output } => {
            cmd_exact(&ExactArgs { truth, pred, json: output.json, manifest: output.manifest }, out)?;
        }
        Command::Estimate {
            pred,
            sample,
            sampling_type,
            weights,
            metric,
            fpc,
            clamp,
            level,
            allow_missing,
            output,
        } => {
            cmd_estimate(
                &EstimateArgs {
                    pred,
                    sample,
                    sampling_type,
                    weights,
                    metric,
                    fpc,
                    clamp,
                    level,
                    allow_missing,
                    json: output.json,
                    manifest: output.manifest,
                },
                out,
            )?;
        }
        Command::Simulate { config, out_dir, threads } => {
            cmd_simulate(&SimulateArgs { config, out_dir, threads }, out)?;
        }
        Command::Synth { config, out_prefix } => {
            cmd_synth(&SynthArgs { config, out_prefix }, out)?;
        }
        Command::Figure1 { config, out_dir, threads } => {
            cmd_figure1(&Figure1Args { config, out_dir, threads }, out)?;
        }
    }
    Ok(())
}
