//! Source overlap with original relations versus dimensions.
//!
//!     cargo run --example overlap -- [edges.tsv] [CN,WN,RG,WD]

use std::path::PathBuf;

use kgdim::ingest::{open_input, read_all};
use kgdim::{assign_dimensions, default_mapping, pairwise_overlap, OverlapMode, ReadOptions};

fn main() -> kgdim::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/food_edges.tsv")
    });
    let sources = args.next().unwrap_or_else(|| "CN,RG,WD,WN".into());
    let sources: Vec<&str> = sources.split(',').collect();

    let (edges, _) = read_all(open_input(&path)?, ReadOptions::default())?;
    let (edges, _) = assign_dimensions(edges, &default_mapping());

    let by_rel = pairwise_overlap(&edges, &sources, OverlapMode::Relation)?;
    let by_dim = pairwise_overlap(&edges, &sources, OverlapMode::Dimension)?;
    println!("{:<8} {:>18} {:>18}", "pair", "relations", "dimensions");
    for (r, d) in by_rel.iter().zip(&by_dim) {
        println!(
            "{:<8} {:>8} ({:>6.2}%) {:>8} ({:>6.2}%)",
            format!("{}-{}", r.source_a, r.source_b),
            r.score.intersection,
            r.score.jaccard * 100.0,
            d.score.intersection,
            d.score.jaccard * 100.0
        );
        for (dim, s) in &d.per_dimension {
            if s.intersection > 0 {
                println!("         {dim}: {} shared", s.intersection);
            }
        }
    }
    Ok(())
}
