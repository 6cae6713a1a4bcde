use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;

/// Separator for multi-valued label and source fields.
pub const MULTI_VALUE_SEPARATOR: char = '|';

/// One assertion of the unified tabular edge format.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub node1: String,
    pub relation: String,
    pub node2: String,
    pub node1_label: String,
    pub node2_label: String,
    pub relation_label: String,
    pub source: String,
    pub sentence: Option<String>,
    pub dimension: Option<Dimension>,
}

impl Edge {
    /// Builds an edge whose labels equal the given node strings. Handy for tests and examples.
    pub fn simple(id: &str, head: &str, relation: &str, tail: &str, source: &str) -> Edge {
        Edge {
            id: id.to_owned(),
            node1: head.to_owned(),
            relation: relation.to_owned(),
            node2: tail.to_owned(),
            node1_label: head.to_owned(),
            node2_label: tail.to_owned(),
            relation_label: String::new(),
            source: source.to_owned(),
            sentence: None,
            dimension: None,
        }
    }

    pub fn with_dimension(mut self, dimension: Dimension) -> Edge {
        self.dimension = Some(dimension);
        self
    }

    /// Individual source ids; CSKG joins merged provenance with `|`.
    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.source
            .split(MULTI_VALUE_SEPARATOR)
            .filter(|s| !s.is_empty())
    }

    pub fn has_source(&self, source: &str) -> bool {
        self.sources().any(|s| s == source)
    }

    pub fn head_label(&self) -> &str {
        first_label(&self.node1_label)
    }

    pub fn tail_label(&self) -> &str {
        first_label(&self.node2_label)
    }
}

/// The first of a `|`-separated label list, trimmed.
pub fn first_label(label: &str) -> &str {
    label
        .split(MULTI_VALUE_SEPARATOR)
        .next()
        .unwrap_or_default()
        .trim()
}
