#![allow(dead_code)]

use clusterwise::{Clustering, MembershipVector};
use num_rational::Ratio;
use proptest::prelude::*;

pub type Q = Ratio<i128>;

pub fn mention(i: usize) -> String {
    format!("m{i:02}")
}

/// Clustering of mentions `m00..` where mention `i` is in cluster `labels[i]`.
pub fn clustering(labels: &[u8]) -> Clustering {
    let mv = MembershipVector::from_pairs(labels.iter().enumerate().map(|(i, l)| (mention(i), format!("k{l}")))).unwrap();
    Clustering::from_membership(&mv)
}

/// Pair counts by looking at every pair of mentions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumerated {
    pub truth: i128,
    pub pred: i128,
    pub common: i128,
}

pub fn enumerate_pairs(truth: &[u8], pred: &[u8]) -> Enumerated {
    let mut e = Enumerated { truth: 0, pred: 0, common: 0 };
    for i in 0..truth.len() {
        for j in i + 1..truth.len() {
            let t = truth[i] == truth[j];
            let p = pred[i] == pred[j];
            e.truth += t as i128;
            e.pred += p as i128;
            e.common += (t && p) as i128;
        }
    }
    e
}

impl Enumerated {
    pub fn precision(&self) -> Q {
        Q::new(self.common, self.pred)
    }

    pub fn recall(&self) -> Q {
        Q::new(self.common, self.truth)
    }
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Truth and prediction label vectors over the same `n` mentions.
pub fn instance(max_n: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (2..=max_n).prop_flat_map(|n| {
        let k = 1..=(n as u8);
        (k.clone(), k).prop_flat_map(move |(kt, kp)| {
            (prop::collection::vec(0..kt, n), prop::collection::vec(0..kp, n))
        })
    })
}

/// Mention groups of a label vector, by label.
pub fn groups(labels: &[u8]) -> Vec<Vec<String>> {
    let mut out: std::collections::BTreeMap<u8, Vec<String>> = Default::default();
    for (i, &l) in labels.iter().enumerate() {
        out.entry(l).or_default().push(mention(i));
    }
    out.into_values().collect()
}
