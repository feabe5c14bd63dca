//! Record sampling: each sampled record `i_s`, drawn with probability
//! `p_{i_s}`, contributes its whole ground-truth cluster `c(i_s)`.

use super::ratio::{fpc_theta, mean, ratio_with_std, variance_of_mean};
use super::{resolve_clusters, ClusterSample, Estimate, WeightScheme, Weights};
use crate::clustering::{choose2, Clustering};
use crate::error::{Error, Result};

/// `1/p_i` per sampled record. Uniform sampling uses `p_i = 1/N` over the
/// prediction's universe.
fn inverse_probabilities(pred: &Clustering, sample: &ClusterSample) -> Result<Vec<f64>> {
    match &sample.design().weights {
        Weights::Scheme(WeightScheme::Uniform) => Ok(vec![pred.universe_size() as f64; sample.len()]),
        Weights::Explicit(p) => Ok(p.iter().map(|p| 1.0 / p).collect()),
        Weights::Scheme(WeightScheme::ClusterSize) => Err(Error::InvalidDesign(
            "record-sampling precision needs normalized record probabilities; \
             size-proportional record weights are only known up to a constant"
                .into(),
        )),
    }
}

/// Unbiased mean of `g(c(i_s), Ĉ) / (|c(i_s)| p_{i_s})`.
///
/// Not a ratio estimator, so the value can exceed 1; it is reported as is.
pub fn precision_record(pred: &Clustering, sample: &ClusterSample) -> Result<Estimate> {
    let inv_p = inverse_probabilities(pred, sample)?;
    let predicted = pred.pair_count()?;
    if predicted == 0 {
        return Err(Error::NoPredictedLinks);
    }
    let clusters = resolve_clusters(pred, sample.clusters())?;
    let terms = clusters
        .iter()
        .zip(&inv_p)
        .map(|(c, &w)| {
            let g = pred.f_value_resolved(c)? as f64 / predicted as f64;
            Ok(g * w / c.len() as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = terms.len();
    let theta = sample.theta()?;
    let value = mean(&terms);
    let std = (n >= 2).then(|| variance_of_mean(&terms, value, theta).sqrt());
    Ok(Estimate { value, std, n, theta })
}

/// Ratio estimator of `Σ f(c(i))/(|c(i)| p_i)` over `Σ C(|c(i)|,2)/(|c(i)| p_i)`.
///
/// Both terms are half of `2f/(|c| p)` and `(|c|−1)/p`; the ratio and its
/// variance do not depend on a common factor, so `p` is only needed up to
/// proportionality here.
pub fn recall_record(pred: &Clustering, sample: &ClusterSample) -> Result<Estimate> {
    let p: Vec<f64> = match &sample.design().weights {
        Weights::Scheme(WeightScheme::Uniform) => vec![1.0; sample.len()],
        Weights::Scheme(WeightScheme::ClusterSize) => sample.clusters().iter().map(|c| c.len() as f64).collect(),
        Weights::Explicit(p) => p.clone(),
    };
    let clusters = resolve_clusters(pred, sample.clusters())?;
    let mut a = Vec::with_capacity(clusters.len());
    let mut b = Vec::with_capacity(clusters.len());
    for (c, &p) in clusters.iter().zip(&p) {
        let scale = c.len() as f64 * p;
        a.push(choose2(c.len() as u64)? as f64 / scale);
        b.push(pred.f_value_resolved(c)? as f64 / scale);
    }
    if a.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateRatio("every sampled cluster is a singleton".into()));
    }
    let theta = fpc_theta(a.len(), sample.design().fpc)?;
    let (value, std) = ratio_with_std(&a, &b, theta)?;
    Ok(Estimate { value, std, n: a.len(), theta })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{SamplingDesign, SamplingType};
    use super::*;
    use approx::assert_relative_eq;

    fn uniform() -> SamplingDesign {
        SamplingDesign::new(SamplingType::Record, WeightScheme::Uniform)
    }

    #[test]
    fn record_census_precision_is_exact() {
        let (truth, pred) = eight_mentions();
        let e = precision_record(&pred, &record_census(&truth, uniform())).unwrap();
        assert_relative_eq!(e.value, 0.4, epsilon = 1e-12);
        assert_eq!(e.n, 8);
        assert_eq!(e.theta, 1.0);
    }

    #[test]
    fn record_census_recall_is_exact_without_correction() {
        let (truth, pred) = eight_mentions();
        let e = recall_record(&pred, &record_census(&truth, uniform().with_fpc(8))).unwrap();
        assert_relative_eq!(e.value, 0.4, epsilon = 1e-12);
        assert_eq!(e.theta, 0.0);
        assert_eq!(e.std, Some(0.0));
    }

    #[test]
    fn single_record_from_one_cluster_universe() {
        let one = Clustering::from_groups(&[vec!["a", "b", "c"]]).unwrap();
        let sample = ClusterSample::new(vec![one.cluster_members(0)], uniform()).unwrap();
        let e = precision_record(&one, &sample).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.std, None);
    }

    #[test]
    fn single_record_of_perfect_prediction() {
        let (truth, _) = eight_mentions();
        let sample = ClusterSample::new(vec![truth.cluster_members(0)], uniform()).unwrap();
        let e = precision_record(&truth, &sample).unwrap();
        // g = 3/5, |c| = 3, p = 1/8
        assert_relative_eq!(e.value, 1.6, epsilon = 1e-12);
        assert_eq!(e.std, None);
        let r = recall_record(&truth, &sample).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.std, None);
    }

    #[test]
    fn singleton_only_recall_is_degenerate() {
        let (truth, pred) = eight_mentions();
        let sample = ClusterSample::new(vec![truth.cluster_members(3); 3], uniform()).unwrap();
        assert!(matches!(recall_record(&pred, &sample), Err(Error::DegenerateRatio(_))));
    }

    #[test]
    fn size_weights_rejected_for_precision() {
        let (truth, pred) = eight_mentions();
        let sample = record_census(&truth, SamplingDesign::new(SamplingType::Record, WeightScheme::ClusterSize));
        assert!(matches!(precision_record(&pred, &sample), Err(Error::InvalidDesign(_))));
        assert!(recall_record(&pred, &sample).is_ok());
    }

    #[test]
    fn no_predicted_links() {
        let (truth, _) = eight_mentions();
        let singletons = Clustering::from_groups(&(1..=8).map(|i| vec![i.to_string()]).collect::<Vec<_>>()).unwrap();
        let sample = record_census(&truth, uniform());
        assert!(matches!(precision_record(&singletons, &sample), Err(Error::NoPredictedLinks)));
    }

    #[test]
    fn unknown_mention_in_sample() {
        let (_, pred) = eight_mentions();
        let sample = ClusterSample::new(vec![vec!["1".into(), "99".into()]], uniform()).unwrap();
        assert!(matches!(precision_record(&pred, &sample), Err(Error::UnknownMention(m)) if m == "99"));
    }
}
