//! Disjoint block sampling. A block is a set of whole ground-truth clusters;
//! predicted links leaving a block count half towards it.

use super::ratio::{fpc_theta, ratio_with_std};
use crate::clustering::{choose2, Clustering};
use crate::error::{Error, Result};

use super::Estimate;

struct BlockTerms {
    /// `|P_b| + ½|P_b⁻|`
    predicted: f64,
    /// `|T_b|`
    matching: u64,
    /// `|T_b ∩ P_b|`
    common: u64,
}

fn block_terms<S: AsRef<str>>(pred: &Clustering, block: &[Vec<S>]) -> Result<BlockTerms> {
    let mut members = Vec::new();
    let mut matching = 0u64;
    let mut common = 0u64;
    for cluster in block {
        let resolved = pred.resolve(cluster)?;
        matching = matching.checked_add(choose2(resolved.len() as u64)?).ok_or(Error::Overflow)?;
        common = common.checked_add(pred.f_value_resolved(&resolved)?).ok_or(Error::Overflow)?;
        members.extend(resolved);
    }
    members.sort_unstable();
    if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateMention(pred.mention(w[0] as usize).to_owned()));
    }
    let (within, outgoing) = pred.block_link_counts_resolved(&members)?;
    // A block made of one truth cluster has only true pairs inside it.
    debug_assert!(block.len() != 1 || within == common);
    Ok(BlockTerms { predicted: within as f64 + 0.5 * outgoing as f64, matching, common })
}

fn check_weights(n: usize, weights: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("no sampled blocks".into()));
    }
    if weights.len() != n {
        return Err(Error::InvalidDesign(format!("{} weights for {n} sampled blocks", weights.len())));
    }
    if let Some(bad) = weights.iter().find(|&&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::InvalidDesign(format!("block weight {bad} is not positive")));
    }
    Ok(())
}

/// Ratio estimator with `A_s = (|P_b| + ½|P_b⁻|)/p_b` and
/// `B_s = |T_b ∩ P_b|/p_b`. Each block is a list of ground-truth clusters;
/// `weights` are the block sampling weights up to proportionality.
pub fn precision_block<S: AsRef<str>>(
    pred: &Clustering,
    blocks: &[Vec<Vec<S>>],
    weights: &[f64],
    fpc: Option<u64>,
) -> Result<Estimate> {
    check_weights(blocks.len(), weights)?;
    let mut a = Vec::with_capacity(blocks.len());
    let mut b = Vec::with_capacity(blocks.len());
    for (block, &p) in blocks.iter().zip(weights) {
        let t = block_terms(pred, block)?;
        a.push(t.predicted / p);
        b.push(t.common as f64 / p);
    }
    if a.iter().all(|&x| x == 0.0) {
        return Err(Error::NoPredictedLinks);
    }
    let theta = fpc_theta(a.len(), fpc)?;
    let (value, std) = ratio_with_std(&a, &b, theta)?;
    Ok(Estimate { value, std, n: a.len(), theta })
}

/// Ratio estimator with `A_s = |T_b|/p_b` and `B_s = |T_b ∩ P_b|/p_b`.
pub fn recall_block<S: AsRef<str>>(
    pred: &Clustering,
    blocks: &[Vec<Vec<S>>],
    weights: &[f64],
    fpc: Option<u64>,
) -> Result<Estimate> {
    check_weights(blocks.len(), weights)?;
    let mut a = Vec::with_capacity(blocks.len());
    let mut b = Vec::with_capacity(blocks.len());
    for (block, &p) in blocks.iter().zip(weights) {
        let t = block_terms(pred, block)?;
        a.push(t.matching as f64 / p);
        b.push(t.common as f64 / p);
    }
    if a.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateRatio("no sampled block contains a matching pair".into()));
    }
    let theta = fpc_theta(a.len(), fpc)?;
    let (value, std) = ratio_with_std(&a, &b, theta)?;
    Ok(Estimate { value, std, n: a.len(), theta })
}
