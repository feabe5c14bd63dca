use rand::Rng;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::estimators::{ClusterSample, SamplingDesign, SamplingType, WeightScheme};

/// Draws `n` ground-truth clusters with replacement, as cluster indices.
/// Size-proportional draws pick a uniform mention and take its cluster.
pub fn draw_cluster_indices<R: Rng + ?Sized>(
    truth: &Clustering,
    n: usize,
    weights: WeightScheme,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if truth.universe_size() == 0 {
        return Err(Error::InvalidInput("cannot sample from an empty clustering".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("sample size must be at least 1".into()));
    }
    Ok((0..n)
        .map(|_| match weights {
            WeightScheme::Uniform => rng.random_range(0..truth.num_clusters()),
            WeightScheme::ClusterSize => truth.cluster_of_index(rng.random_range(0..truth.universe_size())),
        })
        .collect())
}

/// Cluster sample of `n` draws, tagged with a cluster-sampling design under
/// `weights`.
pub fn sample_clusters<R: Rng + ?Sized>(
    truth: &Clustering,
    n: usize,
    weights: WeightScheme,
    rng: &mut R,
) -> Result<ClusterSample> {
    let clusters = draw_cluster_indices(truth, n, weights, rng)?
        .into_iter()
        .map(|c| truth.cluster_members(c))
        .collect();
    ClusterSample::new(clusters, SamplingDesign::new(SamplingType::Cluster, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::rng::stream;

    fn nine_and_one() -> Clustering {
        let big: Vec<String> = (0..9).map(|i| format!("a{i}")).collect();
        Clustering::from_groups(&[big, vec!["b".to_string()]]).unwrap()
    }

    #[test]
    fn single_cluster() {
        let truth = Clustering::from_groups(&[vec!["x", "y"]]).unwrap();
        for w in [WeightScheme::Uniform, WeightScheme::ClusterSize] {
            let s = sample_clusters(&truth, 1, w, &mut stream(0, 0)).unwrap();
            assert_eq!(s.clusters(), &[vec!["x".to_string(), "y".to_string()]]);
            assert_eq!(s.design().weights, crate::estimators::Weights::Scheme(w));
        }
    }

    fn big_cluster_frequency(w: WeightScheme) -> f64 {
        let truth = nine_and_one();
        let draws = draw_cluster_indices(&truth, 100_000, w, &mut stream(11, 1)).unwrap();
        draws.iter().filter(|&&c| truth.cluster_size(c) == 9).count() as f64 / draws.len() as f64
    }

    #[test]
    fn size_proportional_frequency() {
        assert!((big_cluster_frequency(WeightScheme::ClusterSize) - 0.9).abs() < 0.01);
    }

    #[test]
    fn uniform_frequency() {
        assert!((big_cluster_frequency(WeightScheme::Uniform) - 0.5).abs() < 0.01);
    }

    #[test]
    fn empty_inputs() {
        assert!(sample_clusters(&Clustering::empty(), 1, WeightScheme::Uniform, &mut stream(0, 0)).is_err());
        assert!(sample_clusters(&nine_and_one(), 0, WeightScheme::Uniform, &mut stream(0, 0)).is_err());
    }
}
