//! Consolidation of commonsense knowledge-graph edges under 13 knowledge
//! dimensions, with the analyses built on top of it:
//!
//! - [`mapping`]: the relation -> dimension table (built-in default, TSV I/O)
//! - [`ingest`]: streaming edge TSV reader/writer and dimension enrichment
//! - [`coverage`]: edge counts per source and dimension
//! - [`overlap`]: label-normalized triple overlap between sources
//! - [`lexicalize`]: relation templates that turn edges into sentences
//! - [`clustering`]: k-means over external edge embeddings, ARI and
//!   cluster/dimension Jaccard agreement
//! - [`qa`]: per-dimension synthetic multiple-choice QA buckets
//!
//! ```
//! use kgdim::{assign_dimensions, default_mapping, Dimension, Edge};
//!
//! let edges = vec![Edge::simple("e1", "food", "/r/Synonym", "dish", "CN")];
//! let (enriched, stats) = assign_dimensions(edges, &default_mapping());
//! assert_eq!(enriched[0].dimension, Some(Dimension::Similarity));
//! assert_eq!(stats.mapped, 1);
//! ```

pub mod clustering;
pub mod coverage;
pub mod dimension;
pub mod edge;
pub mod error;
pub mod ingest;
pub mod lexicalize;
pub mod mapping;
pub mod output;
pub mod overlap;
pub mod qa;

pub use coverage::{coverage_counts, render_coverage, CoverageMatrix, TableFormat};
pub use dimension::Dimension;
pub use edge::Edge;
pub use error::{Error, Result};
pub use ingest::{assign_dimensions, read_edges, write_edges, AssignStats, ReadOptions};
pub use lexicalize::{default_templates, lexicalize_edge, TemplateTable};
pub use mapping::{default_mapping, load_mapping, Lookup, MappingEntry, MappingTable, Polarity};
pub use overlap::{jaccard, normalize_node, pairwise_overlap, triple_set, OverlapMode};
