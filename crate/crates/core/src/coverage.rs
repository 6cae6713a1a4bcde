//! Edge counts per (source, dimension).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::dimension::Dimension;
use crate::edge::Edge;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(format!("unknown format {other:?}; expected csv or markdown")),
        }
    }
}

/// Edge counts per source and dimension.
///
/// An edge with a multi-valued source (`CN|RG`) counts once for each source.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CoverageMatrix {
    counts: BTreeMap<(String, Dimension), u64>,
    unassigned: BTreeMap<String, u64>,
}

impl CoverageMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, edge: &Edge) {
        for source in edge.sources() {
            match edge.dimension {
                Some(d) => *self.counts.entry((source.to_owned(), d)).or_default() += 1,
                None => *self.unassigned.entry(source.to_owned()).or_default() += 1,
            }
        }
    }

    pub fn get(&self, source: &str, dimension: Dimension) -> u64 {
        self.counts
            .get(&(source.to_owned(), dimension))
            .copied()
            .unwrap_or(0)
    }

    /// Non-zero cells in (source, dimension) order.
    pub fn cells(&self) -> impl Iterator<Item = (&str, Dimension, u64)> {
        self.counts
            .iter()
            .filter(|(_, &n)| n > 0)
            .map(|((s, d), &n)| (s.as_str(), *d, n))
    }

    pub fn unassigned(&self) -> u64 {
        self.unassigned.values().sum()
    }

    pub fn unassigned_by_source(&self) -> &BTreeMap<String, u64> {
        &self.unassigned
    }

    pub fn source_total(&self, source: &str) -> u64 {
        self.cells().filter(|(s, _, _)| *s == source).map(|c| c.2).sum()
    }

    pub fn dimension_total(&self, dimension: Dimension) -> u64 {
        self.cells().filter(|(_, d, _)| *d == dimension).map(|c| c.2).sum()
    }

    pub fn total(&self) -> u64 {
        self.cells().map(|c| c.2).sum()
    }

    /// Sources with at least one assigned edge, sorted.
    pub fn sources(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.cells().map(|(s, _, _)| s).collect();
        set.into_iter().collect()
    }

    /// Cell-wise sum.
    pub fn merge(&mut self, other: &CoverageMatrix) {
        for (k, n) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += n;
        }
        for (k, n) in &other.unassigned {
            *self.unassigned.entry(k.clone()).or_default() += n;
        }
    }
}

pub fn coverage_counts<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> CoverageMatrix {
    let mut m = CoverageMatrix::new();
    for e in edges {
        m.add(e);
    }
    m
}

/// Counts distinct `(node1, relation, node2)` per source instead of raw rows.
pub fn coverage_counts_dedup<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> CoverageMatrix {
    let mut seen: HashSet<(&str, &str, &str, &str)> = HashSet::new();
    let mut m = CoverageMatrix::new();
    for e in edges {
        for source in e.sources() {
            if seen.insert((source, &e.node1, &e.relation, &e.node2)) {
                let single = Edge {
                    source: source.to_owned(),
                    ..e.clone()
                };
                m.add(&single);
            }
        }
    }
    m
}

/// Renders the matrix with one row per dimension that has any count, in the
/// canonical dimension order, and one column per source in lexicographic order.
/// Zero cells are left empty.
pub fn render_coverage(matrix: &CoverageMatrix, format: TableFormat) -> String {
    let sources = matrix.sources();
    let rows: Vec<Dimension> = Dimension::ALL
        .into_iter()
        .filter(|&d| matrix.dimension_total(d) > 0)
        .collect();
    let cell = |s: &str, d: Dimension| match matrix.get(s, d) {
        0 => String::new(),
        n => n.to_string(),
    };
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("dimension");
            for s in &sources {
                write!(out, ",{s}").unwrap();
            }
            out.push('\n');
            for d in rows {
                out.push_str(d.name());
                for s in &sources {
                    write!(out, ",{}", cell(s, d)).unwrap();
                }
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            out.push_str("| dimension |");
            for s in &sources {
                write!(out, " {s} |").unwrap();
            }
            out.push_str("\n|---|");
            for _ in &sources {
                out.push_str("---:|");
            }
            out.push('\n');
            for d in rows {
                write!(out, "| {} |", d.name()).unwrap();
                for s in &sources {
                    write!(out, " {} |", cell(s, d)).unwrap();
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Dimension::*;

    fn six_edges() -> Vec<Edge> {
        vec![
            Edge::simple("1", "a", "/r/Synonym", "b", "CN").with_dimension(Similarity),
            Edge::simple("2", "c", "/r/Synonym", "d", "CN").with_dimension(Similarity),
            Edge::simple("3", "e", "/r/SimilarTo", "f", "CN").with_dimension(Similarity),
            Edge::simple("4", "g", "/r/IsA", "h", "WN").with_dimension(Taxonomic),
            Edge::simple("5", "i", "/r/IsA", "j", "WN").with_dimension(Taxonomic),
            Edge::simple("6", "k", "/r/Mystery", "l", "CN"),
        ]
    }

    #[test]
    fn six_edge_fixture() {
        let m = coverage_counts(&six_edges());
        assert_eq!(m.get("CN", Similarity), 3);
        assert_eq!(m.get("WN", Taxonomic), 2);
        assert_eq!(m.unassigned(), 1);
        assert_eq!(m.cells().count(), 2);
        assert_eq!(m.source_total("CN"), 3);
        assert_eq!(m.dimension_total(Taxonomic), 2);
        assert_eq!(m.total(), 5);
    }

    #[test]
    fn dedup_collapses_repeated_triples() {
        let mut edges = six_edges();
        edges.push(Edge::simple("7", "a", "/r/Synonym", "b", "CN").with_dimension(Similarity));
        assert_eq!(coverage_counts(&edges).get("CN", Similarity), 4);
        assert_eq!(coverage_counts_dedup(&edges).get("CN", Similarity), 3);
    }

    #[test]
    fn empty_matrix_renders_header_only() {
        let m = CoverageMatrix::new();
        assert_eq!(render_coverage(&m, TableFormat::Csv), "dimension\n");
        assert_eq!(
            render_coverage(&m, TableFormat::Markdown),
            "| dimension |\n|---|\n"
        );
    }

    #[test]
    fn single_cell_renders_one_row() {
        let m = coverage_counts(&[Edge::simple("1", "a", "/r/IsA", "b", "WN").with_dimension(Taxonomic)]);
        assert_eq!(
            render_coverage(&m, TableFormat::Csv),
            "dimension,WN\ntaxonomic,1\n"
        );
    }

    #[test]
    fn zero_cells_are_empty_and_rows_follow_dimension_order() {
        let m = coverage_counts(&six_edges());
        let csv = render_coverage(&m, TableFormat::Csv);
        assert_eq!(csv, "dimension,CN,WN\nsimilarity,3,\ntaxonomic,,2\n");
        assert_eq!(csv, render_coverage(&m, TableFormat::Csv));
        let md = render_coverage(&m, TableFormat::Markdown);
        assert!(md.contains("| similarity | 3 |  |"), "{md}");
    }

    #[test]
    fn multi_source_edges_count_per_source() {
        let e = Edge::simple("1", "a", "/r/Synonym", "b", "CN|RG").with_dimension(Similarity);
        let m = coverage_counts([&e]);
        assert_eq!(m.get("CN", Similarity), 1);
        assert_eq!(m.get("RG", Similarity), 1);
    }
}
