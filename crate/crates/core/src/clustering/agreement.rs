//! Agreement between an embedding clustering and the dimension partition.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ari::ari_from_labels;
use super::kmeans::Clustering;
use crate::dimension::Dimension;
use crate::edge::Edge;
use crate::error::{Error, Result};

/// Edge id -> dimension, plus the number of dimensionless edges left out.
pub fn dimension_partition<'a>(
    edges: impl IntoIterator<Item = &'a Edge>,
) -> (HashMap<String, Dimension>, u64) {
    let mut map = HashMap::new();
    let mut excluded = 0;
    for e in edges {
        match e.dimension {
            Some(d) => {
                map.insert(e.id.clone(), d);
            }
            None => excluded += 1,
        }
    }
    (map, excluded)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairScore {
    pub cluster: usize,
    pub dimension: Dimension,
    pub intersection: u64,
    pub jaccard: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub ari: f64,
    /// One score per (cluster, dimension present in the partition).
    pub pair_jaccard: Vec<PairScore>,
    /// `pair_jaccard` sorted by descending Jaccard, then cluster, then dimension.
    pub top_pairs: Vec<PairScore>,
    /// For each cluster, its three best-matching dimensions.
    pub per_cluster_top: Vec<Vec<PairScore>>,
}

impl AgreementReport {
    pub fn jaccard(&self, cluster: usize, dimension: Dimension) -> Option<f64> {
        self.pair_jaccard
            .iter()
            .find(|p| p.cluster == cluster && p.dimension == dimension)
            .map(|p| p.jaccard)
    }
}

fn by_score(a: &PairScore, b: &PairScore) -> Ordering {
    b.jaccard
        .total_cmp(&a.jaccard)
        .then(a.cluster.cmp(&b.cluster))
        .then(a.dimension.cmp(&b.dimension))
}

fn check_ids(clustering: &Clustering, dims: &HashMap<String, Dimension>) -> Result<()> {
    if clustering.ids.len() != dims.len() {
        return Err(Error::IdMismatch(format!(
            "clustering has {} ids, dimension partition has {}",
            clustering.ids.len(),
            dims.len()
        )));
    }
    if let Some(id) = clustering.ids.iter().find(|id| !dims.contains_key(*id)) {
        return Err(Error::IdMismatch(format!("id {id:?} has no dimension")));
    }
    Ok(())
}

/// ARI plus the Jaccard score of every (cluster, dimension) pair of edge sets.
pub fn cluster_dimension_jaccard(
    clustering: &Clustering,
    dims: &HashMap<String, Dimension>,
) -> Result<AgreementReport> {
    check_ids(clustering, dims)?;
    let dim_labels: Vec<Dimension> = clustering.ids.iter().map(|id| dims[id]).collect();
    let ari = ari_from_labels(&clustering.labels, &dim_labels);

    let mut cluster_size = vec![0u64; clustering.k];
    let mut dim_size: BTreeMap<Dimension, u64> = BTreeMap::new();
    let mut both: HashMap<(usize, Dimension), u64> = HashMap::new();
    for (&c, &d) in clustering.labels.iter().zip(&dim_labels) {
        cluster_size[c] += 1;
        *dim_size.entry(d).or_default() += 1;
        *both.entry((c, d)).or_default() += 1;
    }

    let mut pair_jaccard = Vec::new();
    for (c, &cs) in cluster_size.iter().enumerate() {
        for (&d, &ds) in &dim_size {
            let inter = both.get(&(c, d)).copied().unwrap_or(0);
            let union = cs + ds - inter;
            pair_jaccard.push(PairScore {
                cluster: c,
                dimension: d,
                intersection: inter,
                jaccard: if union == 0 { 0.0 } else { inter as f64 / union as f64 },
            });
        }
    }
    let mut top_pairs = pair_jaccard.clone();
    top_pairs.sort_by(by_score);
    let per_cluster_top = (0..clustering.k)
        .map(|c| {
            top_pairs
                .iter()
                .filter(|p| p.cluster == c)
                .take(3)
                .cloned()
                .collect()
        })
        .collect();
    Ok(AgreementReport {
        ari,
        pair_jaccard,
        top_pairs,
        per_cluster_top,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterProfile {
    pub cluster: usize,
    pub size: u64,
    pub dimensions: BTreeMap<Dimension, u64>,
    pub unassigned: u64,
    /// Most frequent node ids with their degree inside the cluster.
    pub top_nodes: Vec<(String, u64)>,
}

impl ClusterProfile {
    pub fn share(&self, dimension: Dimension) -> f64 {
        if self.size == 0 {
            return 0.0;
        }
        self.dimensions.get(&dimension).copied().unwrap_or(0) as f64 / self.size as f64
    }
}

/// Per-cluster dimension histogram and node frequencies. Both endpoints of an
/// edge count; frequency ties are broken by node id. Edges without a cluster
/// are ignored.
pub fn cluster_profile<'a>(
    clustering: &Clustering,
    edges: impl IntoIterator<Item = &'a Edge>,
    top_n: usize,
) -> Vec<ClusterProfile> {
    let mut profiles: Vec<ClusterProfile> = (0..clustering.k)
        .map(|c| ClusterProfile {
            cluster: c,
            size: 0,
            dimensions: BTreeMap::new(),
            unassigned: 0,
            top_nodes: Vec::new(),
        })
        .collect();
    let mut nodes: Vec<HashMap<&str, u64>> = vec![HashMap::new(); clustering.k];
    for e in edges {
        let Some(c) = clustering.cluster_of(&e.id) else {
            continue;
        };
        let p = &mut profiles[c];
        p.size += 1;
        match e.dimension {
            Some(d) => *p.dimensions.entry(d).or_default() += 1,
            None => p.unassigned += 1,
        }
        *nodes[c].entry(&e.node1).or_default() += 1;
        *nodes[c].entry(&e.node2).or_default() += 1;
    }
    for (p, freq) in profiles.iter_mut().zip(nodes) {
        let mut ranked: Vec<(&str, u64)> = freq.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        p.top_nodes = ranked
            .into_iter()
            .take(top_n)
            .map(|(n, f)| (n.to_owned(), f))
            .collect();
    }
    profiles
}

/// Seeded uniform sample of `n` clustered ids (all of them when `n` exceeds the
/// count), returned in id order.
pub fn sample_ids(clustering: &Clustering, n: usize, seed: u64) -> Vec<&str> {
    let total = clustering.ids.len();
    if n >= total {
        return clustering.ids.iter().map(String::as_str).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, total, n).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| clustering.ids[i].as_str()).collect()
}

/// `id\tcluster\tdimension` rows for external projection and plotting.
pub fn write_assignments<'a>(
    clustering: &Clustering,
    dims: &HashMap<String, Dimension>,
    ids: impl IntoIterator<Item = &'a str>,
    mut out: impl Write,
) -> Result<()> {
    writeln!(out, "id\tcluster\tdimension")?;
    for id in ids {
        let cluster = clustering
            .cluster_of(id)
            .ok_or_else(|| Error::IdMismatch(format!("id {id:?} is not clustered")))?;
        let dim = dims.get(id).map(|d| d.name()).unwrap_or("");
        writeln!(out, "{id}\t{cluster}\t{dim}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Dimension::*;

    fn clustering(assign: &[(&str, usize)], k: usize) -> Clustering {
        let mut pairs: Vec<_> = assign.to_vec();
        pairs.sort();
        Clustering {
            k,
            ids: pairs.iter().map(|p| p.0.to_owned()).collect(),
            labels: pairs.iter().map(|p| p.1).collect(),
            centroids: vec![vec![]; k],
            inertia: 0.0,
            inertia_history: vec![],
            seed: 0,
            iterations: 0,
        }
    }

    #[test]
    fn partition_projection() {
        let edges = vec![
            Edge::simple("1", "a", "/r/Synonym", "b", "CN").with_dimension(Similarity),
            Edge::simple("2", "a", "/r/X", "b", "CN"),
            Edge::simple("3", "a", "/r/IsA", "b", "CN").with_dimension(Taxonomic),
        ];
        let (map, excluded) = dimension_partition(&edges);
        assert_eq!(map.len(), 2);
        assert_eq!(excluded, 1);
        assert_eq!(map["1"], Similarity);
    }

    #[test]
    fn exact_cluster_match_scores_one() {
        let c = clustering(&[("a", 0), ("b", 0), ("c", 1)], 2);
        let dims: HashMap<String, Dimension> =
            [("a".into(), Spatial), ("b".into(), Spatial), ("c".into(), Temporal)].into();
        let r = cluster_dimension_jaccard(&c, &dims).unwrap();
        assert_eq!(r.jaccard(0, Spatial), Some(1.0));
        assert_eq!(r.jaccard(0, Temporal), Some(0.0));
        assert_eq!(r.ari, 1.0);
        assert_eq!(r.top_pairs[0].jaccard, 1.0);
        assert_eq!(r.per_cluster_top[1][0].dimension, Temporal);
    }

    #[test]
    fn three_vs_five_overlap_two() {
        // cluster 0 = {a,b,x}; dimension quality = {a,b,p,q,r}
        let c = clustering(
            &[("a", 0), ("b", 0), ("x", 0), ("p", 1), ("q", 1), ("r", 1)],
            2,
        );
        let dims: HashMap<String, Dimension> = [
            ("a".into(), Quality),
            ("b".into(), Quality),
            ("x".into(), Lexical),
            ("p".into(), Quality),
            ("q".into(), Quality),
            ("r".into(), Quality),
        ]
        .into();
        let r = cluster_dimension_jaccard(&c, &dims).unwrap();
        assert!((r.jaccard(0, Quality).unwrap() - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_ids_are_rejected() {
        let c = clustering(&[("a", 0)], 1);
        let dims: HashMap<String, Dimension> = [("b".into(), Quality)].into();
        assert!(cluster_dimension_jaccard(&c, &dims).is_err());
    }

    #[test]
    fn profile_top_node_and_histogram() {
        let edges = vec![
            Edge::simple("e1", "a", "r", "b", "CN").with_dimension(Spatial),
            Edge::simple("e2", "a", "r", "c", "CN").with_dimension(Spatial),
        ];
        let c = clustering(&[("e1", 0), ("e2", 0)], 1);
        let p = cluster_profile(&c, &edges, 2);
        assert_eq!(p[0].top_nodes[0], ("a".to_owned(), 2));
        assert_eq!(p[0].top_nodes[1], ("b".to_owned(), 1));
        assert_eq!(p[0].dimensions.values().sum::<u64>(), p[0].size);
    }

    #[test]
    fn sample_is_seeded_and_sorted() {
        let ids: Vec<(String, usize)> = (0..100).map(|i| (format!("e{i:03}"), i % 3)).collect();
        let refs: Vec<(&str, usize)> = ids.iter().map(|(s, c)| (s.as_str(), *c)).collect();
        let c = clustering(&refs, 3);
        let a = sample_ids(&c, 10, 5);
        assert_eq!(a.len(), 10);
        assert_eq!(a, sample_ids(&c, 10, 5));
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_ids(&c, 1000, 5).len(), 100);
    }
}
