//! Build per-dimension QA buckets from an edge file and write them out.
//!
//!     cargo run --example qa_generation -- [edges.tsv] [out_dir]

use std::path::PathBuf;

use kgdim::ingest::{open_input, read_all};
use kgdim::output::write_dir_atomic;
use kgdim::qa::{build_buckets, write_buckets, BuildOptions};
use kgdim::{assign_dimensions, default_mapping, default_templates, ReadOptions};

fn main() -> kgdim::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/food_edges.tsv")
    });
    let out = args.next().map(PathBuf::from);

    let (edges, _) = read_all(open_input(&path)?, ReadOptions::default())?;
    let (edges, _) = assign_dimensions(edges, &default_mapping());
    let (buckets, report) = build_buckets(&edges, &default_templates(), &BuildOptions::with_seed(42))?;

    print!("{}", report.to_tsv());
    println!(
        "dropped: {} RelatedTo, {} without dimension, {} without distractors",
        report.excluded_relation, report.no_dimension, report.insufficient_distractors
    );

    for b in buckets.iter().take(3) {
        let item = &b.train[0];
        println!("\n[{}] {}", b.dimension, item.question);
        println!("  answer:      {}", item.answer);
        println!("  distractors: {} / {}", item.distractors[0], item.distractors[1]);
    }

    if let Some(dir) = out {
        write_dir_atomic(&dir, true, |d| write_buckets(d, &buckets, &report))?;
        println!("\nwrote {}", dir.display());
    }
    Ok(())
}
