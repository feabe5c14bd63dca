//! Each estimator's expectation, evaluated by exhaustive summation over the
//! records, clusters or blocks with exact probabilities, reproduces the
//! exact metrics. A sample in which each unit appears with multiplicity
//! proportional to its probability, at θ = 0, computes that expectation.

mod common;

use clusterwise::estimators::{precision_block, recall_block};
use clusterwise::{estimate, ClusterSample, Clustering, Metric, SamplingDesign, SamplingType, WeightScheme, Weights};
use common::*;
use proptest::prelude::*;

struct Case {
    truth: Clustering,
    pred: Clustering,
    precision: f64,
    recall: f64,
}

fn case(t: &[u8], p: &[u8]) -> Option<Case> {
    let e = enumerate_pairs(t, p);
    (e.truth > 0 && e.pred > 0).then(|| Case {
        truth: clustering(t),
        pred: clustering(p),
        precision: to_f64(e.precision()),
        recall: to_f64(e.recall()),
    })
}

fn repeated(units: &[Vec<String>], mult: &[usize]) -> Vec<Vec<String>> {
    units.iter().zip(mult).flat_map(|(u, &m)| std::iter::repeat_n(u.clone(), m)).collect()
}

fn check(pred: &Clustering, clusters: Vec<Vec<String>>, t: SamplingType, w: Weights, metric: Metric, want: f64) {
    let n = clusters.len() as u64;
    let design = SamplingDesign { sampling_type: t, weights: w, fpc: Some(n) };
    let got = estimate(pred, &ClusterSample::new(clusters, design).unwrap(), metric).unwrap().value;
    assert!((got - want).abs() <= 1e-12, "{t} {metric}: {got} vs {want}");
}

fn record_census(c: &Case, mult: &[usize]) {
    let own: Vec<Vec<String>> = (0..c.truth.universe_size()).map(|i| c.truth.cluster_members(c.truth.cluster_of_index(i))).collect();
    let clusters = repeated(&own, mult);
    let total: usize = mult.iter().sum();
    let p: Vec<f64> = mult.iter().flat_map(|&m| std::iter::repeat_n(m as f64 / total as f64, m)).collect();
    if mult.iter().all(|&m| m == 1) {
        check(&c.pred, clusters.clone(), SamplingType::Record, WeightScheme::Uniform.into(), Metric::Precision, c.precision);
        check(&c.pred, clusters.clone(), SamplingType::Record, WeightScheme::Uniform.into(), Metric::Recall, c.recall);
    }
    check(&c.pred, clusters.clone(), SamplingType::Record, Weights::Explicit(p.clone()), Metric::Precision, c.precision);
    check(&c.pred, clusters, SamplingType::Record, Weights::Explicit(p), Metric::Recall, c.recall);
}

fn cluster_census(c: &Case, mult: &[usize]) {
    let units = c.truth.clusters();
    let w: Vec<f64> = mult.iter().flat_map(|&m| std::iter::repeat_n(m as f64, m)).collect();
    for t in [SamplingType::Cluster, SamplingType::ClusterBlock] {
        for metric in [Metric::Precision, Metric::Recall] {
            let want = if metric == Metric::Precision { c.precision } else { c.recall };
            check(&c.pred, repeated(&units, mult), t, Weights::Explicit(w.clone()), metric, want);
            check(&c.pred, units.clone(), t, WeightScheme::Uniform.into(), metric, want);
            let sizes: Vec<usize> = units.iter().map(Vec::len).collect();
            check(&c.pred, repeated(&units, &sizes), t, WeightScheme::ClusterSize.into(), metric, want);
        }
    }
}

fn block_census(c: &Case, block_of: &[u8], by_size: bool) {
    let mut blocks: std::collections::BTreeMap<u8, Vec<Vec<String>>> = Default::default();
    for (k, cl) in c.truth.clusters().into_iter().enumerate() {
        blocks.entry(block_of[k % block_of.len()]).or_default().push(cl);
    }
    let blocks: Vec<Vec<Vec<String>>> = blocks.into_values().collect();
    let mult: Vec<usize> = blocks.iter().map(|b| if by_size { b.iter().map(Vec::len).sum() } else { 1 }).collect();
    let sample: Vec<Vec<Vec<String>>> = blocks.iter().zip(&mult).flat_map(|(b, &m)| std::iter::repeat_n(b.clone(), m)).collect();
    let w: Vec<f64> = mult.iter().flat_map(|&m| std::iter::repeat_n(m as f64, m)).collect();
    let fpc = Some(sample.len() as u64);
    let p = precision_block(&c.pred, &sample, &w, fpc).unwrap().value;
    let r = recall_block(&c.pred, &sample, &w, fpc).unwrap().value;
    assert!((p - c.precision).abs() <= 1e-12, "{p} vs {}", c.precision);
    assert!((r - c.recall).abs() <= 1e-12, "{r} vs {}", c.recall);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn record_sampling((t, p) in instance(20), mult in prop::collection::vec(1usize..4, 20)) {
        if let Some(c) = case(&t, &p) {
            record_census(&c, &vec![1; t.len()]);
            record_census(&c, &mult[..t.len()]);
        }
    }

    #[test]
    fn cluster_sampling((t, p) in instance(20), mult in prop::collection::vec(1usize..4, 20)) {
        if let Some(c) = case(&t, &p) {
            cluster_census(&c, &mult[..c.truth.num_clusters()]);
        }
    }

    #[test]
    fn block_sampling((t, p) in instance(20), block_of in prop::collection::vec(0u8..4, 1..8)) {
        if let Some(c) = case(&t, &p) {
            block_census(&c, &block_of, false);
            block_census(&c, &block_of, true);
        }
    }
}

#[test]
fn single_block_census_is_exact() {
    let c = case(&[0, 0, 0, 1, 1, 2, 2, 3], &[0, 1, 1, 0, 2, 3, 3, 3]).unwrap();
    for metric in [Metric::Precision, Metric::Recall] {
        let sample = ClusterSample::new(c.truth.clusters(), SamplingDesign::parse("single_block", "uniform").unwrap()).unwrap();
        let e = estimate(&c.pred, &sample, metric).unwrap();
        assert_eq!((e.n, e.std), (1, None));
        assert!((e.value - 0.4).abs() <= 1e-12);
    }
}
