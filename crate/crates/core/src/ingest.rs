//! Streaming reader and writer for the unified edge TSV, and the dimension
//! enrichment pass.
//!
//! Output always carries the full ten-column header. Input needs only `id`,
//! `node1`, `relation` and `node2`; the remaining known columns are optional and
//! unknown columns are ignored.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use serde::Serialize;

use crate::dimension::Dimension;
use crate::edge::Edge;
use crate::error::{Error, Result};
use crate::mapping::{Lookup, MappingTable};

pub const EDGE_COLUMNS: [&str; 10] = [
    "id",
    "node1",
    "relation",
    "node2",
    "node1;label",
    "node2;label",
    "relation;label",
    "relation;dimension",
    "source",
    "sentence",
];

const MANDATORY: usize = 4;

#[derive(Debug, Clone, Default)]
pub struct ReadOptions {
    /// Keep only edges with at least one of these source ids.
    pub source_filter: Option<HashSet<String>>,
    /// Abort on the first malformed row instead of skipping it.
    pub strict: bool,
    /// Source id given to rows when the input has no `source` column.
    pub default_source: Option<String>,
}

impl ReadOptions {
    pub fn strict() -> Self {
        ReadOptions {
            strict: true,
            ..Default::default()
        }
    }

    pub fn with_sources<I, S>(mut self, sources: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.source_filter = Some(sources.into_iter().map(Into::into).collect());
        self
    }
}

/// A row that could not be turned into an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReadStats {
    pub rows: u64,
    pub yielded: u64,
    pub filtered: u64,
    pub errors: Vec<RowError>,
}

/// Maps each known column to its position in the input.
#[derive(Debug, Clone)]
struct ColumnIndex {
    positions: [Option<usize>; 10],
    width: usize,
}

impl ColumnIndex {
    fn parse(header: &str) -> Result<Self> {
        let names: Vec<&str> = header.split('\t').collect();
        let mut positions = [None; 10];
        for (slot, column) in positions.iter_mut().zip(EDGE_COLUMNS) {
            *slot = names.iter().position(|n| *n == column);
        }
        if let Some(missing) = (0..MANDATORY).find(|&i| positions[i].is_none()) {
            return Err(Error::MissingColumn(EDGE_COLUMNS[missing].to_owned()));
        }
        Ok(ColumnIndex {
            positions,
            width: names.len(),
        })
    }

    fn get<'a>(&self, fields: &[&'a str], column: usize) -> &'a str {
        self.positions[column].map(|p| fields[p]).unwrap_or("")
    }
}

/// Iterator over the edges of a TSV stream.
///
/// Yields edges in file order. In lenient mode malformed rows are recorded in
/// [`ReadStats::errors`] and skipped; in strict mode the first one is yielded as
/// an error and iteration stops.
pub struct EdgeReader<R> {
    lines: io::Lines<R>,
    columns: ColumnIndex,
    options: ReadOptions,
    stats: ReadStats,
    line_no: usize,
    done: bool,
}

impl<R: BufRead> EdgeReader<R> {
    pub fn new(reader: R, options: ReadOptions) -> Result<Self> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(h) => h?,
            None => return Err(Error::malformed(1, "empty edge file: missing header")),
        };
        let columns = ColumnIndex::parse(header.trim_end_matches('\r'))?;
        Ok(EdgeReader {
            lines,
            columns,
            options,
            stats: ReadStats::default(),
            line_no: 1,
            done: false,
        })
    }

    pub fn stats(&self) -> &ReadStats {
        &self.stats
    }

    pub fn into_stats(self) -> ReadStats {
        self.stats
    }

    fn parse_row(&self, line: &str) -> std::result::Result<Edge, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != self.columns.width {
            return Err(format!(
                "expected {} fields, found {}",
                self.columns.width,
                fields.len()
            ));
        }
        let col = |i| self.columns.get(&fields, i);
        for (i, name) in EDGE_COLUMNS.iter().enumerate().take(MANDATORY) {
            if col(i).is_empty() {
                return Err(format!("empty {name}"));
            }
        }
        let source = match self.columns.positions[8] {
            Some(_) => col(8).to_owned(),
            None => self.options.default_source.clone().unwrap_or_default(),
        };
        if source.is_empty() {
            return Err("empty source".to_owned());
        }
        let dimension = match col(7) {
            "" => None,
            name => Some(name.parse::<Dimension>().map_err(|e| e.to_string())?),
        };
        let sentence = match col(9) {
            "" => None,
            s => Some(s.to_owned()),
        };
        Ok(Edge {
            id: col(0).to_owned(),
            node1: col(1).to_owned(),
            relation: col(2).to_owned(),
            node2: col(3).to_owned(),
            node1_label: col(4).to_owned(),
            node2_label: col(5).to_owned(),
            relation_label: col(6).to_owned(),
            source,
            sentence,
            dimension,
        })
    }
}

impl<R: BufRead> Iterator for EdgeReader<R> {
    type Item = Result<Edge>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            };
            self.line_no += 1;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.is_empty() {
                continue;
            }
            self.stats.rows += 1;
            match self.parse_row(line) {
                Ok(edge) => {
                    if let Some(filter) = &self.options.source_filter {
                        if !edge.sources().any(|s| filter.contains(s)) {
                            self.stats.filtered += 1;
                            continue;
                        }
                    }
                    self.stats.yielded += 1;
                    return Some(Ok(edge));
                }
                Err(message) => {
                    if self.options.strict {
                        self.done = true;
                        return Some(Err(Error::malformed(self.line_no, message)));
                    }
                    self.stats.errors.push(RowError {
                        line: self.line_no,
                        message,
                    });
                }
            }
        }
    }
}

pub fn read_edges<R: BufRead>(reader: R, options: ReadOptions) -> Result<EdgeReader<R>> {
    EdgeReader::new(reader, options)
}

/// Reads a whole stream into memory.
pub fn read_all<R: BufRead>(reader: R, options: ReadOptions) -> Result<(Vec<Edge>, ReadStats)> {
    let mut r = EdgeReader::new(reader, options)?;
    let edges = r.by_ref().collect::<Result<Vec<_>>>()?;
    Ok((edges, r.into_stats()))
}

/// Opens a file for reading, decompressing transparently when the name ends in `.gz`.
pub fn open_input(path: impl AsRef<Path>) -> Result<Box<dyn BufRead + Send>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    if is_gzip(path) {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

pub fn read_edges_path(
    path: impl AsRef<Path>,
    options: ReadOptions,
) -> Result<(Vec<Edge>, ReadStats)> {
    read_all(open_input(path)?, options)
}

fn is_gzip(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

/// Wraps `sink` in a gzip encoder when `path` ends in `.gz`.
pub fn maybe_gzip<'a, W: Write + 'a>(path: &Path, sink: W) -> Box<dyn Write + 'a> {
    if is_gzip(path) {
        Box::new(GzEncoder::new(sink, flate2::Compression::default()))
    } else {
        Box::new(sink)
    }
}

/// Streaming writer for the ten-column edge TSV.
pub struct EdgeWriter<W: Write> {
    out: W,
    written: u64,
}

impl<W: Write> EdgeWriter<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{}", EDGE_COLUMNS.join("\t"))?;
        Ok(EdgeWriter { out, written: 0 })
    }

    pub fn write(&mut self, edge: &Edge) -> Result<()> {
        let dimension = edge.dimension.map(Dimension::name).unwrap_or("");
        let fields: [(&'static str, &str); 10] = [
            ("id", &edge.id),
            ("node1", &edge.node1),
            ("relation", &edge.relation),
            ("node2", &edge.node2),
            ("node1;label", &edge.node1_label),
            ("node2;label", &edge.node2_label),
            ("relation;label", &edge.relation_label),
            ("relation;dimension", dimension),
            ("source", &edge.source),
            ("sentence", edge.sentence.as_deref().unwrap_or("")),
        ];
        if let Some((name, _)) = fields
            .iter()
            .find(|(_, v)| v.contains(['\t', '\n', '\r']))
        {
            return Err(Error::IllegalField {
                id: edge.id.clone(),
                field: name,
            });
        }
        let mut row = String::with_capacity(fields.iter().map(|(_, v)| v.len() + 1).sum());
        for (i, (_, v)) in fields.iter().enumerate() {
            if i > 0 {
                row.push('\t');
            }
            row.push_str(v);
        }
        row.push('\n');
        self.out.write_all(row.as_bytes())?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Writes a header and every edge; returns the number of rows written.
pub fn write_edges<'a, W: Write>(
    edges: impl IntoIterator<Item = &'a Edge>,
    out: W,
) -> Result<u64> {
    let mut w = EdgeWriter::new(out)?;
    for e in edges {
        w.write(e)?;
    }
    let n = w.written();
    w.finish()?;
    Ok(n)
}

/// Tallies from [`assign_dimensions`]. Merging is addition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AssignStats {
    pub mapped: u64,
    pub excluded: u64,
    pub unmapped: BTreeMap<String, u64>,
}

impl AssignStats {
    pub fn unmapped_total(&self) -> u64 {
        self.unmapped.values().sum()
    }

    pub fn total(&self) -> u64 {
        self.mapped + self.excluded + self.unmapped_total()
    }

    pub fn merge(&mut self, other: &AssignStats) {
        self.mapped += other.mapped;
        self.excluded += other.excluded;
        for (r, n) in &other.unmapped {
            *self.unmapped.entry(r.clone()).or_default() += n;
        }
    }
}

/// Incremental form of [`assign_dimensions`] for streaming pipelines.
pub struct DimensionAssigner<'t> {
    table: &'t MappingTable,
    stats: AssignStats,
}

impl<'t> DimensionAssigner<'t> {
    pub fn new(table: &'t MappingTable) -> Self {
        DimensionAssigner {
            table,
            stats: AssignStats::default(),
        }
    }

    /// Returns the enriched edge, or `None` when its relation is excluded.
    pub fn assign(&mut self, mut edge: Edge) -> Option<Edge> {
        match self.table.lookup_any(&edge.relation, edge.sources()) {
            Lookup::Mapped(entry) => {
                edge.dimension = Some(entry.dimension);
                self.stats.mapped += 1;
                Some(edge)
            }
            Lookup::Excluded => {
                self.stats.excluded += 1;
                None
            }
            Lookup::Unmapped => {
                edge.dimension = None;
                *self.stats.unmapped.entry(edge.relation.clone()).or_default() += 1;
                Some(edge)
            }
        }
    }

    pub fn stats(&self) -> &AssignStats {
        &self.stats
    }

    pub fn into_stats(self) -> AssignStats {
        self.stats
    }
}

/// Sets each edge's dimension from `table`, dropping excluded relations.
/// Unmapped relations pass through without a dimension and are tallied.
pub fn assign_dimensions(
    edges: impl IntoIterator<Item = Edge>,
    table: &MappingTable,
) -> (Vec<Edge>, AssignStats) {
    let mut assigner = DimensionAssigner::new(table);
    let enriched = edges.into_iter().filter_map(|e| assigner.assign(e)).collect();
    (enriched, assigner.into_stats())
}
