//! Stream an edge file, attach dimensions and write the enriched edges.
//!
//!     cargo run --example enrich_edges -- [edges.tsv[.gz]] [out.tsv[.gz]]

use std::path::PathBuf;

use kgdim::ingest::{maybe_gzip, open_input, read_edges, DimensionAssigner, EdgeWriter};
use kgdim::{default_mapping, ReadOptions};

fn main() -> kgdim::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/food_edges.tsv")
    });
    let output = args.next().map(PathBuf::from);

    let table = default_mapping();
    let mut assigner = DimensionAssigner::new(&table);
    let mut reader = read_edges(open_input(&input)?, ReadOptions::default())?;

    let sink: Box<dyn std::io::Write> = match &output {
        Some(p) => maybe_gzip(p, std::fs::File::create(p)?),
        None => Box::new(std::io::sink()),
    };
    let mut writer = EdgeWriter::new(sink)?;
    for edge in reader.by_ref() {
        if let Some(edge) = assigner.assign(edge?) {
            writer.write(&edge)?;
        }
    }
    writer.finish()?.flush()?;

    let read = reader.stats();
    let stats = assigner.stats();
    println!("rows {}  malformed {}", read.rows, read.errors.len());
    println!("mapped {}  excluded {}  unmapped {}", stats.mapped, stats.excluded, stats.unmapped_total());
    for (rel, n) in &stats.unmapped {
        println!("  unmapped {rel}: {n}");
    }
    if let Some(p) = output {
        println!("wrote {}", p.display());
    }
    Ok(())
}
