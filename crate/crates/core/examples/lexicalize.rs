//! Turn edges into sentences with the built-in templates, overriding one.
//!
//!     cargo run --example lexicalize

use kgdim::{default_templates, lexicalize_edge, Edge, TemplateTable};

fn main() -> kgdim::Result<()> {
    let edges = [
        Edge::simple("1", "food", "/r/CapableOf", "go rotten", "CN"),
        Edge::simple("2", "butter", "/r/AtLocation", "refrigerator", "CN"),
        Edge::simple("3", "PersonX eats dinner", "at:xEffect", "gets full", "AT"),
        Edge::simple("4", "bread", "P186", "flour", "WD"),
        Edge {
            relation_label: "pairs well with".into(),
            ..Edge::simple("5", "cheese", "/r/PairsWith", "wine", "XX")
        },
    ];

    let mut custom = TemplateTable::new();
    custom.insert("/r/AtLocation", "you can find {head} in the {tail}")?;
    let templates = default_templates().overlay(&custom);

    for e in &edges {
        println!("{}\t{}", e.id, lexicalize_edge(e, &templates)?);
    }
    Ok(())
}
