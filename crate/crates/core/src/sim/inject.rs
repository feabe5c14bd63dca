//! Error injection: misattributing mentions to other entities' clusters.

use rand::seq::index;
use rand::Rng;

use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Moves `⌊rate·N⌋` distinct mentions, drawn uniformly without replacement,
/// each into the ground-truth cluster of an independently drawn uniform
/// mention. Drawing a donor mention rather than a donor cluster makes large
/// clusters more likely to receive errors. The donor may be the moved
/// mention itself, in which case nothing changes for it.
pub fn inject_misattribution<R: Rng + ?Sized>(truth: &Clustering, rate: f64, rng: &mut R) -> Result<Clustering> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidInput(format!("misattribution rate {rate} is outside [0, 1]")));
    }
    let n = truth.universe_size();
    if n == 0 {
        return Err(Error::InvalidInput("cannot corrupt an empty clustering".into()));
    }
    let moves = (rate * n as f64).floor() as usize;
    let moved = index::sample(rng, n, moves).into_vec();
    let donors: Vec<usize> = (0..moves).map(|_| rng.random_range(0..n)).collect();
    Ok(reassign(truth, &moved, &donors))
}

/// Puts each `moved[k]` into the original cluster of `donors[k]`.
pub(crate) fn reassign(truth: &Clustering, moved: &[usize], donors: &[usize]) -> Clustering {
    let original = truth.assignment();
    let mut keys = original.to_vec();
    for (&m, &d) in moved.iter().zip(donors) {
        keys[m] = original[d];
    }
    Clustering::from_dense(truth.shared_universe(), &keys, truth.labels())
}
