//! Synthetic ground truth with a heavy-tailed cluster size distribution.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Cluster sizes follow `P(k) ∝ k^(−size_exponent)` on `1..=max_cluster_size`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticTruthConfig {
    pub mentions: usize,
    pub size_exponent: f64,
    pub max_cluster_size: usize,
}

impl Default for SyntheticTruthConfig {
    fn default() -> Self {
        Self { mentions: 100_000, size_exponent: 2.5, max_cluster_size: 100 }
    }
}

impl SyntheticTruthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mentions == 0 {
            return Err(Error::InvalidInput("mentions must be positive".into()));
        }
        if self.max_cluster_size == 0 {
            return Err(Error::InvalidInput("max_cluster_size must be positive".into()));
        }
        if !self.size_exponent.is_finite() {
            return Err(Error::InvalidInput("size_exponent must be finite".into()));
        }
        Ok(())
    }
}

/// Mention ids `m0000000…`, entity labels `e0000000…`; fixed width keeps
/// string order equal to numeric order.
pub fn generate_truth<R: Rng + ?Sized>(cfg: &SyntheticTruthConfig, rng: &mut R) -> Result<Clustering> {
    cfg.validate()?;
    let sizes = WeightedIndex::new((1..=cfg.max_cluster_size).map(|k| (k as f64).powf(-cfg.size_exponent)))
        .map_err(|e| Error::InvalidInput(format!("cluster size distribution: {e}")))?;
    let mut keys = Vec::with_capacity(cfg.mentions);
    let mut entity = 0u32;
    while keys.len() < cfg.mentions {
        let size = (sizes.sample(rng) + 1).min(cfg.mentions - keys.len());
        keys.extend(std::iter::repeat_n(entity, size));
        entity += 1;
    }
    let universe = (0..cfg.mentions).map(|i| format!("m{i:07}")).collect();
    let labels: Vec<String> = (0..entity).map(|e| format!("e{e:07}")).collect();
    Ok(Clustering::from_dense(universe, &keys, &labels))
}
