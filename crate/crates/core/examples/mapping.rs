//! Inspect the built-in relation -> dimension table.
//!
//!     cargo run --example mapping [-- out.tsv]

use kgdim::{default_mapping, Dimension, Lookup};

fn main() -> kgdim::Result<()> {
    let table = default_mapping();
    println!("{} entries, checksum {}", table.len(), table.checksum());

    for d in Dimension::ALL {
        let n = table.entries().filter(|e| e.dimension == d).count();
        println!("{:>18}  {n}", d.name());
    }

    for (rel, src) in [("/r/AtLocation", "CN"), ("hypernym", "WN"), ("P279", "WD"), ("/r/dbpedia/genre", "CN"), ("/r/Foo", "CN")] {
        match table.lookup(rel, src) {
            Lookup::Mapped(e) => println!("{src} {rel} -> {} ({})", e.dimension, e.polarity.name()),
            Lookup::Excluded => println!("{src} {rel} -> excluded"),
            Lookup::Unmapped => println!("{src} {rel} -> unmapped"),
        }
    }

    if let Some(path) = std::env::args().nth(1) {
        table.write(std::fs::File::create(&path)?)?;
        // the file round-trips
        assert_eq!(kgdim::load_mapping(&path)?.to_tsv(), table.to_tsv());
        println!("wrote {path}");
    }
    Ok(())
}
