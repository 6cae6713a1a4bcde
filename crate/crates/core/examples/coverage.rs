//! Edges per dimension and source, as a Markdown table.
//!
//!     cargo run --example coverage -- [edges.tsv]

use std::path::PathBuf;

use kgdim::ingest::{open_input, read_all};
use kgdim::{assign_dimensions, coverage_counts, default_mapping, render_coverage, ReadOptions, TableFormat};

fn main() -> kgdim::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/food_edges.tsv")
    });
    let (edges, _) = read_all(open_input(&path)?, ReadOptions::default())?;
    let (edges, _) = assign_dimensions(edges, &default_mapping());

    let matrix = coverage_counts(&edges);
    print!("{}", render_coverage(&matrix, TableFormat::Markdown));
    println!();
    for source in matrix.sources() {
        println!("{source}: {} edges", matrix.source_total(source));
    }
    println!("without dimension: {}", matrix.unassigned());
    Ok(())
}
