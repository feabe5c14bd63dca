//! Clusterings of mentions, exact pair counting and the per-cluster
//! decomposition terms that the estimators are built from.
//!
//! A [`Clustering`] interns its mention ids into a sorted universe and stores
//! one dense cluster index per mention. Pair counts are always derived from
//! cluster-intersection sizes; record pairs are never materialized.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, MismatchReport, Result};

/// `n choose 2`, erroring instead of wrapping.
pub fn choose2(n: u64) -> Result<u64> {
    if n < 2 {
        return Ok(0);
    }
    let (a, b) = if n % 2 == 0 { (n / 2, n - 1) } else { (n, (n - 1) / 2) };
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn add(acc: u64, x: u64) -> Result<u64> {
    acc.checked_add(x).ok_or(Error::Overflow)
}

/// Mention id to cluster id assignment, iterated in mention-id order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MembershipVector {
    entries: BTreeMap<String, String>,
}

impl MembershipVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a membership vector, rejecting repeated mention ids and empty
    /// cluster ids.
    pub fn from_pairs<I, M, C>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, C)>,
        M: Into<String>,
        C: Into<String>,
    {
        let mut mv = Self::new();
        for (m, c) in pairs {
            mv.insert(m, c)?;
        }
        Ok(mv)
    }

    pub fn insert(&mut self, mention: impl Into<String>, cluster: impl Into<String>) -> Result<()> {
        let mention = mention.into();
        let cluster = cluster.into();
        if cluster.is_empty() {
            return Err(Error::EmptyClusterId(mention));
        }
        if self.entries.contains_key(&mention) {
            return Err(Error::DuplicateMention(mention));
        }
        self.entries.insert(mention, cluster);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, mention: &str) -> Option<&str> {
        self.entries.get(mention).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.entries.iter().map(|(m, c)| (m.as_str(), c.as_str()))
    }

    /// Groups mentions by cluster id; groups come out in cluster-id order.
    pub fn groups(&self) -> Vec<Vec<String>> {
        let mut by_cluster: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for (m, c) in self.iter() {
            by_cluster.entry(c).or_default().push(m.to_owned());
        }
        by_cluster.into_values().collect()
    }
}

/// `|T|`, `|P|` and `|T ∩ P|` for a ground truth / prediction pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStats {
    pub matching_pairs: u64,
    pub predicted_pairs: u64,
    pub common_pairs: u64,
}

impl PairStats {
    pub fn precision(&self) -> Result<f64> {
        if self.predicted_pairs == 0 {
            return Err(Error::NoPredictedLinks);
        }
        Ok(self.common_pairs as f64 / self.predicted_pairs as f64)
    }

    pub fn recall(&self) -> Result<f64> {
        if self.matching_pairs == 0 {
            return Err(Error::NoTrueLinks);
        }
        Ok(self.common_pairs as f64 / self.matching_pairs as f64)
    }
}

/// A partition of a universe of mention ids.
///
/// Clusters are ordered by their label (the cluster id), and members within
/// a cluster by mention id, so every traversal is deterministic.
#[derive(Debug, Clone)]
pub struct Clustering {
    universe: Arc<[String]>,
    assignment: Vec<u32>,
    members: Vec<Vec<u32>>,
    labels: Vec<String>,
}

impl PartialEq for Clustering {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self.assignment == other.assignment
            && self.labels == other.labels
    }
}

impl Eq for Clustering {}

impl Clustering {
    pub fn empty() -> Self {
        Self {
            universe: Arc::from(Vec::new()),
            assignment: Vec::new(),
            members: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// One cluster per distinct cluster id.
    pub fn from_membership(mv: &MembershipVector) -> Self {
        let universe: Arc<[String]> = mv.entries.keys().cloned().collect();
        let keys: Vec<&str> = mv.entries.values().map(String::as_str).collect();
        Self::from_keys(universe, &keys)
    }

    /// Builds a clustering from explicit groups. Groups must be non-empty and
    /// pairwise disjoint; each cluster is labelled by its smallest mention id.
    pub fn from_groups<S: AsRef<str>>(groups: &[Vec<S>]) -> Result<Self> {
        let mut mv = MembershipVector::new();
        for group in groups {
            let label = group
                .iter()
                .map(AsRef::as_ref)
                .min()
                .ok_or_else(|| Error::InvalidInput("empty cluster".into()))?
                .to_owned();
            for m in group {
                mv.insert(m.as_ref(), label.clone())?;
            }
        }
        Ok(Self::from_membership(&mv))
    }

    /// Groups `universe` (sorted, unique) by the per-mention `keys`.
    fn from_keys<K: Ord + Copy + AsRef<str>>(universe: Arc<[String]>, keys: &[K]) -> Self {
        debug_assert_eq!(universe.len(), keys.len());
        let mut index: BTreeMap<K, u32> = BTreeMap::new();
        for k in keys {
            index.entry(*k).or_insert(0);
        }
        let mut labels = Vec::with_capacity(index.len());
        for (i, (k, slot)) in index.iter_mut().enumerate() {
            *slot = i as u32;
            labels.push(k.as_ref().to_owned());
        }
        let mut members = vec![Vec::new(); labels.len()];
        let assignment = keys
            .iter()
            .enumerate()
            .map(|(m, k)| {
                let c = index[k];
                members[c as usize].push(m as u32);
                c
            })
            .collect();
        Self { universe, assignment, members, labels }
    }

    /// Rebuilds a clustering on an existing universe from dense cluster keys
    /// (any `u32` per mention) and a label for each key. Keys left unused are
    /// dropped. `key_labels` must be strictly increasing.
    pub(crate) fn from_dense(universe: Arc<[String]>, keys: &[u32], key_labels: &[String]) -> Self {
        debug_assert!(key_labels.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(universe.len(), keys.len());
        let mut remap = vec![u32::MAX; key_labels.len()];
        for &k in keys {
            remap[k as usize] = 0;
        }
        let mut labels = Vec::new();
        for (k, slot) in remap.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = labels.len() as u32;
                labels.push(key_labels[k].clone());
            }
        }
        let mut members = vec![Vec::new(); labels.len()];
        let assignment = keys
            .iter()
            .enumerate()
            .map(|(m, &k)| {
                let c = remap[k as usize];
                members[c as usize].push(m as u32);
                c
            })
            .collect();
        Self { universe, assignment, members, labels }
    }

    pub fn to_membership(&self) -> MembershipVector {
        let entries = self
            .universe
            .iter()
            .zip(&self.assignment)
            .map(|(m, &c)| (m.clone(), self.labels[c as usize].clone()))
            .collect();
        MembershipVector { entries }
    }

    /// `N`, the number of mentions.
    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.members.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub(crate) fn shared_universe(&self) -> Arc<[String]> {
        Arc::clone(&self.universe)
    }

    pub fn mention(&self, index: usize) -> &str {
        &self.universe[index]
    }

    pub fn mention_index(&self, mention: &str) -> Option<usize> {
        self.universe.binary_search_by(|m| m.as_str().cmp(mention)).ok()
    }

    pub fn label(&self, cluster: usize) -> &str {
        &self.labels[cluster]
    }

    pub fn cluster_of_index(&self, mention: usize) -> usize {
        self.assignment[mention] as usize
    }

    pub fn cluster_of(&self, mention: &str) -> Option<&str> {
        self.mention_index(mention).map(|i| self.label(self.cluster_of_index(i)))
    }

    pub fn cluster_size(&self, cluster: usize) -> usize {
        self.members[cluster].len()
    }

    pub(crate) fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub(crate) fn member_indices(&self, cluster: usize) -> &[u32] {
        &self.members[cluster]
    }

    /// Mention ids of one cluster, sorted.
    pub fn cluster_members(&self, cluster: usize) -> Vec<String> {
        self.member_indices(cluster).iter().map(|&i| self.universe[i as usize].clone()).collect()
    }

    /// All clusters as sorted mention-id lists, in label order.
    pub fn clusters(&self) -> Vec<Vec<String>> {
        (0..self.num_clusters()).map(|c| self.cluster_members(c)).collect()
    }

    /// `Σ_c C(|c|, 2)`: the number of co-clustered pairs.
    pub fn pair_count(&self) -> Result<u64> {
        self.members.iter().try_fold(0, |acc, m| add(acc, choose2(m.len() as u64)?))
    }

    pub fn check_same_universe(&self, other: &Clustering) -> Result<()> {
        if Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe {
            return Ok(());
        }
        let mut diff = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.universe, &other.universe);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    diff.push(x.clone());
                    i += 1;
                }
                (Some(_), Some(y)) => {
                    diff.push(y.clone());
                    j += 1;
                }
                (Some(x), None) => {
                    diff.push(x.clone());
                    i += 1;
                }
                (None, Some(y)) => {
                    diff.push(y.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let total = diff.len();
        diff.truncate(MismatchReport::MAX_LISTED);
        Err(Error::UniverseMismatch(MismatchReport { total, sample: diff }))
    }

    /// Maps mention ids to universe indices, rejecting unknown and repeated
    /// ids. The result is sorted.
    pub(crate) fn resolve<S: AsRef<str>>(&self, mentions: &[S]) -> Result<Vec<u32>> {
        let mut idx = mentions
            .iter()
            .map(|m| {
                let m = m.as_ref();
                self.mention_index(m)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::UnknownMention(m.to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        if let Some(w) = idx.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMention(self.universe[w[0] as usize].clone()));
        }
        Ok(idx)
    }

    /// Sizes `|ĉ ∩ set|` for every cluster `ĉ` meeting `set`, as
    /// `(cluster, count)` in cluster order. `set` must be resolved indices.
    pub(crate) fn intersection_sizes(&self, set: &[u32]) -> Vec<(usize, u64)> {
        let mut clusters: Vec<u32> = set.iter().map(|&i| self.assignment[i as usize]).collect();
        clusters.sort_unstable();
        let mut out: Vec<(usize, u64)> = Vec::new();
        for c in clusters {
            match out.last_mut() {
                Some((last, k)) if *last == c as usize => *k += 1,
                _ => out.push((c as usize, 1)),
            }
        }
        out
    }

    pub(crate) fn f_value_resolved(&self, set: &[u32]) -> Result<u64> {
        self.intersection_sizes(set)
            .into_iter()
            .try_fold(0, |acc, (_, k)| add(acc, choose2(k)?))
    }

    pub(crate) fn block_link_counts_resolved(&self, block: &[u32]) -> Result<(u64, u64)> {
        let mut within = 0;
        let mut outgoing = 0;
        for (c, k) in self.intersection_sizes(block) {
            let size = self.members[c].len() as u64;
            within = add(within, choose2(k)?)?;
            outgoing = add(outgoing, k.checked_mul(size - k).ok_or(Error::Overflow)?)?;
        }
        Ok((within, outgoing))
    }

    /// `f(c, Ĉ) = Σ_ĉ C(|c ∩ ĉ|, 2)`: pairs of `c` that this clustering
    /// puts together.
    pub fn f_value<S: AsRef<str>>(&self, c: &[S]) -> Result<u64> {
        self.f_value_resolved(&self.resolve(c)?)
    }

    /// `g(c, Ĉ) = f(c, Ĉ) / Σ_ĉ C(|ĉ|, 2)`.
    pub fn g_value<S: AsRef<str>>(&self, c: &[S]) -> Result<f64> {
        let f = self.f_value(c)?;
        let total = self.pair_count()?;
        if total == 0 {
            return Err(Error::NoPredictedLinks);
        }
        Ok(f as f64 / total as f64)
    }

    /// Predicted links inside `block` and links with exactly one end in it.
    pub fn block_link_counts<S: AsRef<str>>(&self, block: &[S]) -> Result<(u64, u64)> {
        self.block_link_counts_resolved(&self.resolve(block)?)
    }

    /// Intersects every cluster with `subset`, dropping clusters left empty.
    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<Clustering> {
        let idx = self.resolve(subset)?;
        let universe: Arc<[String]> = idx.iter().map(|&i| self.universe[i as usize].clone()).collect();
        let keys: Vec<u32> = idx.iter().map(|&i| self.assignment[i as usize]).collect();
        Ok(Self::from_dense(universe, &keys, &self.labels))
    }
}

impl From<&MembershipVector> for Clustering {
    fn from(mv: &MembershipVector) -> Self {
        Self::from_membership(mv)
    }
}

/// Exact `|T|`, `|P|`, `|T ∩ P|` from the contingency of cluster
/// intersections.
pub fn pair_stats(truth: &Clustering, pred: &Clustering) -> Result<PairStats> {
    truth.check_same_universe(pred)?;
    let mut common = 0;
    for members in &pred.members {
        let mut truth_ids: Vec<u32> = members.iter().map(|&m| truth.assignment[m as usize]).collect();
        truth_ids.sort_unstable();
        for run in truth_ids.chunk_by(|a, b| a == b) {
            common = add(common, choose2(run.len() as u64)?)?;
        }
    }
    Ok(PairStats {
        matching_pairs: truth.pair_count()?,
        predicted_pairs: pred.pair_count()?,
        common_pairs: common,
    })
}

/// Pairwise `(precision, recall)` of `pred` against `truth`.
pub fn exact_precision_recall(truth: &Clustering, pred: &Clustering) -> Result<(f64, f64)> {
    let stats = pair_stats(truth, pred)?;
    Ok((stats.precision()?, stats.recall()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn eight_mentions() -> (Clustering, Clustering) {
        let truth = Clustering::from_groups(&[vec!["1", "2", "3"], vec!["4", "5"], vec!["6", "7"], vec!["8"]]).unwrap();
        let pred = Clustering::from_groups(&[vec!["1", "4"], vec!["2", "3"], vec!["5"], vec!["6", "7", "8"]]).unwrap();
        (truth, pred)
    }

    #[test]
    fn choose2_small_and_overflow() {
        assert_eq!(choose2(0).unwrap(), 0);
        assert_eq!(choose2(1).unwrap(), 0);
        assert_eq!(choose2(5).unwrap(), 10);
        assert_eq!(choose2(10_000_000).unwrap(), 49_999_995_000_000);
        assert!(matches!(choose2(u64::MAX), Err(Error::Overflow)));
    }

    #[test]
    fn from_membership_groups_by_cluster_id() {
        let mv = MembershipVector::from_pairs([("1", "a"), ("2", "a"), ("3", "b")]).unwrap();
        let c = Clustering::from_membership(&mv);
        assert_eq!(c.universe_size(), 3);
        assert_eq!(c.clusters(), vec![vec!["1", "2"], vec!["3"]]);
    }

    #[test]
    fn empty_membership() {
        let c = Clustering::from_membership(&MembershipVector::new());
        assert_eq!(c.universe_size(), 0);
        assert_eq!(c.num_clusters(), 0);
    }

    #[test]
    fn duplicate_mention_rejected() {
        let err = MembershipVector::from_pairs([("1", "a"), ("1", "b")]).unwrap_err();
        assert!(matches!(err, Error::DuplicateMention(m) if m == "1"));
        let err = Clustering::from_groups(&[vec!["1", "2"], vec!["2"]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateMention(_)));
    }

    #[test]
    fn empty_cluster_id_rejected() {
        assert!(matches!(
            MembershipVector::from_pairs([("1", "")]),
            Err(Error::EmptyClusterId(_))
        ));
    }

    #[test]
    fn iteration_sorted_regardless_of_insertion() {
        let mv = MembershipVector::from_pairs([("b", "x"), ("a", "y"), ("c", "x")]).unwrap();
        let ids: Vec<_> = mv.iter().map(|(m, _)| m).collect();
        assert_eq!(ids, ["a", "b", "c"]);
    }

    #[test]
    fn eight_mentions_counts() {
        let (truth, pred) = eight_mentions();
        assert_eq!(truth.num_clusters(), 4);
        assert_eq!(truth.universe_size(), 8);
        let s = pair_stats(&truth, &pred).unwrap();
        assert_eq!((s.matching_pairs, s.predicted_pairs, s.common_pairs), (5, 5, 2));
        assert_eq!(exact_precision_recall(&truth, &pred).unwrap(), (0.4, 0.4));
    }

    #[test]
    fn identity_is_perfect() {
        let (truth, _) = eight_mentions();
        let s = pair_stats(&truth, &truth).unwrap();
        assert_eq!(s.common_pairs, s.matching_pairs);
        assert_eq!(s.common_pairs, s.predicted_pairs);
        assert_eq!(exact_precision_recall(&truth, &truth).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn singletons_have_no_links() {
        let (truth, _) = eight_mentions();
        let singletons = Clustering::from_groups(&(1..=8).map(|i| vec![i.to_string()]).collect::<Vec<_>>()).unwrap();
        assert!(matches!(exact_precision_recall(&truth, &singletons), Err(Error::NoPredictedLinks)));
        assert!(matches!(exact_precision_recall(&singletons, &truth), Err(Error::NoTrueLinks)));
    }

    #[test]
    fn universe_mismatch_lists_ids() {
        let (truth, _) = eight_mentions();
        let other = Clustering::from_groups(&[vec!["1", "2", "9"]]).unwrap();
        match pair_stats(&truth, &other) {
            Err(Error::UniverseMismatch(r)) => {
                assert_eq!(r.total, 7);
                assert_eq!(r.sample, ["3", "4", "5", "6", "7", "8", "9"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn f_and_g_on_eight_mentions() {
        let (_, pred) = eight_mentions();
        assert_eq!(pred.f_value(&["1", "2", "3"]).unwrap(), 1);
        assert_eq!(pred.g_value(&["1", "2", "3"]).unwrap(), 0.2);
        assert_eq!(pred.f_value(&["5"]).unwrap(), 0);
        // {6,7,8} sits inside one predicted cluster
        assert_eq!(pred.f_value(&["6", "7", "8"]).unwrap(), 3);
        assert_eq!(pred.g_value(&["4", "5"]).unwrap(), 0.0);
        assert!(matches!(pred.f_value(&["42"]), Err(Error::UnknownMention(_))));
    }

    #[test]
    fn g_needs_predicted_links() {
        let singletons = Clustering::from_groups(&[vec!["1"], vec!["2"]]).unwrap();
        assert!(matches!(singletons.g_value(&["1"]), Err(Error::NoPredictedLinks)));
    }

    #[test]
    fn restrict_eight_mentions() {
        let (_, pred) = eight_mentions();
        let r = pred.restrict(&["1", "2", "3", "4", "5"]).unwrap();
        assert_eq!(r.clusters(), vec![vec!["1", "4"], vec!["2", "3"], vec!["5"]]);
        assert_eq!(r.universe_size(), 5);
        assert_eq!(pred.restrict(pred.universe()).unwrap(), pred);
        let none: [&str; 0] = [];
        assert_eq!(pred.restrict(&none).unwrap().num_clusters(), 0);
        assert!(matches!(pred.restrict(&["x"]), Err(Error::UnknownMention(_))));
    }

    #[test]
    fn block_links_on_eight_mentions() {
        let (_, pred) = eight_mentions();
        assert_eq!(pred.block_link_counts(&["1", "2", "3"]).unwrap(), (1, 1));
        assert_eq!(pred.block_link_counts(pred.universe()).unwrap(), (5, 0));
        let none: [&str; 0] = [];
        assert_eq!(pred.block_link_counts(&none).unwrap(), (0, 0));
    }

    #[test]
    fn membership_round_trip() {
        let (truth, pred) = eight_mentions();
        for c in [truth, pred] {
            assert_eq!(Clustering::from_membership(&c.to_membership()), c);
        }
    }
}
