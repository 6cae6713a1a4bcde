use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use kgdim::clustering::{ari_from_labels, kmeans, KMeansParams, VectorTable};
use kgdim::ingest::read_all;
use kgdim::overlap::{RelKey, TripleSet};
use kgdim::{
    assign_dimensions, coverage_counts, default_mapping, jaccard, triple_set, write_edges,
    Dimension, Edge, OverlapMode, ReadOptions,
};

const NODES: &[&str] = &["food", "Food", "bread", "apple", "dish|plate", "eat", "meal", "fork"];
const RELATIONS: &[&str] = &[
    "/r/IsA",
    "/r/MannerOf",
    "/r/Synonym",
    "/r/SimilarTo",
    "/r/UsedFor",
    "/r/AtLocation",
    "/r/dbpedia/genre",
    "/r/NoSuchRelation",
];
const SOURCES: &[&str] = &["CN", "WN", "RG", "CN|RG"];

fn edge_strategy() -> impl Strategy<Value = Edge> {
    (
        0..NODES.len(),
        0..RELATIONS.len(),
        0..NODES.len(),
        0..SOURCES.len(),
        proptest::option::of("[a-z ]{0,12}"),
        proptest::option::of(0..Dimension::COUNT),
    )
        .prop_map(|(h, r, t, s, sentence, dim)| {
            let mut e = Edge::simple("", NODES[h], RELATIONS[r], NODES[t], SOURCES[s]);
            e.sentence = sentence.filter(|s| !s.is_empty());
            e.dimension = dim.map(|i| Dimension::from_index(i).unwrap());
            e
        })
}

fn edges_strategy(max: usize) -> impl Strategy<Value = Vec<Edge>> {
    proptest::collection::vec(edge_strategy(), 0..max).prop_map(|mut v| {
        for (i, e) in v.iter_mut().enumerate() {
            e.id = format!("e{i}");
        }
        v
    })
}

proptest! {
    #[test]
    fn ingest_round_trip(edges in edges_strategy(40)) {
        let mut buf = Vec::new();
        write_edges(&edges, &mut buf).unwrap();
        let (back, stats) = read_all(buf.as_slice(), ReadOptions::strict()).unwrap();
        prop_assert_eq!(stats.rows as usize, edges.len());
        prop_assert_eq!(back, edges);
    }

    #[test]
    fn assignment_is_idempotent_and_conserves_rows(edges in edges_strategy(40)) {
        let table = default_mapping();
        let (once, stats) = assign_dimensions(edges.clone(), &table);
        prop_assert_eq!(stats.mapped + stats.excluded + stats.unmapped_total(), edges.len() as u64);
        let (twice, _) = assign_dimensions(once.clone(), &table);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn coverage_permutation_invariant(edges in edges_strategy(40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = edges.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(coverage_counts(&edges), coverage_counts(&shuffled));
    }

    #[test]
    fn coverage_additive(a in edges_strategy(30), b in edges_strategy(30)) {
        let mut merged = coverage_counts(&a);
        merged.merge(&coverage_counts(&b));
        prop_assert_eq!(coverage_counts(a.iter().chain(&b)), merged);
    }

    #[test]
    fn overlap_symmetric_and_coarsening(edges in edges_strategy(60)) {
        let (edges, _) = assign_dimensions(edges, &default_mapping());
        let only = |s: &str| -> Vec<Edge> { edges.iter().filter(|e| e.has_source(s)).cloned().collect() };
        let (cn, rg) = (only("CN"), only("RG"));
        let (ra, _) = triple_set(&cn, OverlapMode::Relation);
        let (rb, _) = triple_set(&rg, OverlapMode::Relation);
        let (da, _) = triple_set(&cn, OverlapMode::Dimension);
        let (db, _) = triple_set(&rg, OverlapMode::Dimension);
        prop_assert_eq!(jaccard(&ra, &rb), jaccard(&rb, &ra));
        prop_assert_eq!(jaccard(&da, &db), jaccard(&db, &da));

        let table = default_mapping();
        let image: TripleSet = ra
            .intersection(&rb)
            .filter_map(|t| {
                let RelKey::Relation(r) = &t.rel else { unreachable!() };
                let d = table.lookup(r, "CN").dimension()?;
                Some(kgdim::overlap::NormalizedTriple { rel: RelKey::Dimension(d), ..t.clone() })
            })
            .collect();
        let dim_inter: TripleSet = da.intersection(&db).cloned().collect();
        prop_assert!(image.is_subset(&dim_inter));
        prop_assert!(da.union(&db).count() <= ra.union(&rb).count());
    }

    #[test]
    fn ari_symmetric_and_relabel_invariant(
        a in proptest::collection::vec(0u8..4, 2..40),
        perm_seed in any::<u64>(),
        b_seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng, seq::SliceRandom};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(b_seed);
        let b: Vec<u8> = a.iter().map(|_| rng.random_range(0..3)).collect();
        prop_assert_eq!(ari_from_labels(&a, &b), ari_from_labels(&b, &a));
        let mut perm: Vec<u8> = (0..4).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let relabeled: Vec<u8> = a.iter().map(|&x| perm[x as usize]).collect();
        let x = ari_from_labels(&a, &b);
        let y = ari_from_labels(&relabeled, &b);
        prop_assert!((x - y).abs() < 1e-12, "{x} vs {y}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kmeans_ignores_row_order(
        points in proptest::collection::vec((-50.0f32..50.0, -50.0f32..50.0), 6..60),
        seed in any::<u64>(),
    ) {
        let ids: Vec<String> = (0..points.len()).map(|i| format!("p{i:03}")).collect();
        let mut forward = VectorTable::new(2);
        for (id, (x, y)) in ids.iter().zip(&points) {
            forward.push(id, &[*x, *y]).unwrap();
        }
        let mut backward = VectorTable::new(2);
        for (id, (x, y)) in ids.iter().zip(&points).rev() {
            backward.push(id, &[*x, *y]).unwrap();
        }
        let params = KMeansParams { k: 3, seed, ..Default::default() };
        let a = kmeans(&forward, &params).unwrap();
        let b = kmeans(&backward, &params).unwrap();
        prop_assert_eq!(a.labels, b.labels);
        prop_assert_eq!(a.inertia.to_bits(), b.inertia.to_bits());
    }
}

#[test]
fn cluster_dimension_counts_sum_to_dimension_size() {
    use kgdim::clustering::cluster_dimension_jaccard;
    let mut table = VectorTable::new(1);
    let mut dims = HashMap::new();
    for i in 0..30 {
        let id = format!("e{i:02}");
        table.push(&id, &[(i % 7) as f32 * 10.0]).unwrap();
        dims.insert(id, Dimension::from_index(i % 4).unwrap());
    }
    let c = kmeans(&table, &KMeansParams::with_k(3)).unwrap();
    let report = cluster_dimension_jaccard(&c, &dims).unwrap();
    for d in dims.values().collect::<HashSet<_>>() {
        let total: u64 = report.pair_jaccard.iter().filter(|p| p.dimension == *d).map(|p| p.intersection).sum();
        let size = dims.values().filter(|x| *x == d).count() as u64;
        assert_eq!(total, size);
    }
    assert!(report.pair_jaccard.iter().all(|p| (0.0..=1.0).contains(&p.jaccard)));
}
