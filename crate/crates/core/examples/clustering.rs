//! k-means over edge vectors and its agreement with the dimension partition.
//!
//! Real runs load embeddings with `load_vectors`; here each edge gets a noisy
//! vector placed near a point chosen by its dimension, so the clusters should
//! mostly line up with the dimensions.
//!
//!     cargo run --example clustering

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kgdim::clustering::{
    cluster_dimension_jaccard, cluster_profile, dimension_partition, kmeans, KMeansParams, VectorTable,
};
use kgdim::ingest::{open_input, read_all};
use kgdim::{assign_dimensions, default_mapping, ReadOptions};

fn main() -> kgdim::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/food_edges.tsv");
    let (edges, _) = read_all(open_input(&path)?, ReadOptions::default())?;
    let (edges, _) = assign_dimensions(edges, &default_mapping());
    let (dims, dropped) = dimension_partition(&edges);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut vectors = VectorTable::new(8);
    for e in &edges {
        let Some(d) = e.dimension else { continue };
        let v: Vec<f32> = (0..8)
            .map(|j| if j == d.index() % 8 { 4.0 } else { 0.0 } + rng.random_range(-1.0..1.0))
            .collect();
        vectors.push(&e.id, &v)?;
    }

    let clustering = kmeans(&vectors, &KMeansParams { k: 8, ..Default::default() })?;
    let report = cluster_dimension_jaccard(&clustering, &dims)?;
    println!("{} edges ({dropped} without dimension), {} iterations", vectors.len(), clustering.iterations);
    println!("inertia {:.2}, ARI {:.3}", clustering.inertia, report.ari);

    println!("best cluster/dimension pairs:");
    for p in report.top_pairs.iter().take(5) {
        println!("  {} {:<16} {:.3}", p.cluster, p.dimension.name(), p.jaccard);
    }

    for profile in cluster_profile(&clustering, &edges, 3) {
        let top = profile.dimensions.iter().max_by_key(|(_, n)| **n).map(|(d, _)| *d).unwrap();
        println!(
            "cluster {}: {} edges, {:.0}% {}, top nodes {:?}",
            profile.cluster,
            profile.size,
            profile.share(top) * 100.0,
            top,
            profile.top_nodes
        );
    }
    Ok(())
}
