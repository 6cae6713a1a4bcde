//! Relation to dimension mapping: the built-in default table, TSV loading and saving.
//!
//! A [`MappingTable`] is a function from `(relation, source scope)` to a
//! [`MappingEntry`]. Lookups prefer an entry scoped to the edge's source and
//! fall back to the unscoped entry. Relations matching one of the excluded
//! prefixes short-circuit to [`Lookup::Excluded`].
//!
//! The mapping TSV has the header `relation\tdimension\tpolarity\tsource_scope`.
//! An excluded prefix is written as a row whose relation ends in `*` and whose
//! dimension column holds the reserved word `excluded`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dimension::Dimension;
use crate::error::{Error, Result};

pub const MAPPING_HEADER: &str = "relation\tdimension\tpolarity\tsource_scope";
const EXCLUDED_KEYWORD: &str = "excluded";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negated,
}

impl Polarity {
    pub fn name(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negated => "negated",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Polarity::Positive),
            "negated" => Ok(Polarity::Negated),
            other => Err(format!(
                "unknown polarity {other:?}; expected positive or negated"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MappingEntry {
    pub relation: String,
    pub dimension: Dimension,
    pub polarity: Polarity,
    pub source_scope: Option<String>,
}

/// Outcome of resolving a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup<'a> {
    Mapped(&'a MappingEntry),
    Excluded,
    Unmapped,
}

impl<'a> Lookup<'a> {
    pub fn dimension(&self) -> Option<Dimension> {
        match self {
            Lookup::Mapped(e) => Some(e.dimension),
            _ => None,
        }
    }
}

type Key = (String, Option<String>);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingTable {
    entries: BTreeMap<Key, MappingEntry>,
    excluded_prefixes: Vec<String>,
}

impl MappingTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry; fails if `(relation, scope)` is already present.
    pub fn insert(&mut self, entry: MappingEntry) -> Result<()> {
        self.insert_at(entry, 0)
    }

    fn insert_at(&mut self, entry: MappingEntry, line: usize) -> Result<()> {
        let key = (entry.relation.clone(), entry.source_scope.clone());
        if self.entries.contains_key(&key) {
            return Err(Error::DuplicateMapping {
                line,
                relation: key.0,
                scope: key.1,
            });
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    pub fn exclude_prefix(&mut self, prefix: impl Into<String>) {
        let prefix = prefix.into();
        if !self.excluded_prefixes.contains(&prefix) {
            self.excluded_prefixes.push(prefix);
            self.excluded_prefixes.sort();
        }
    }

    pub fn excluded_prefixes(&self) -> &[String] {
        &self.excluded_prefixes
    }

    /// Entries in canonical `(relation, scope)` order.
    pub fn entries(&self) -> impl Iterator<Item = &MappingEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_excluded(&self, relation: &str) -> bool {
        self.excluded_prefixes
            .iter()
            .any(|p| relation.starts_with(p.as_str()))
    }

    /// Resolves `relation` for an edge from `source`.
    pub fn lookup(&self, relation: &str, source: &str) -> Lookup<'_> {
        self.lookup_any(relation, std::iter::once(source))
    }

    /// Like [`lookup`](Self::lookup) for edges carrying several source ids: the
    /// first source with a scoped entry wins, then the unscoped entry.
    pub fn lookup_any<'s>(
        &self,
        relation: &str,
        sources: impl IntoIterator<Item = &'s str>,
    ) -> Lookup<'_> {
        if self.is_excluded(relation) {
            return Lookup::Excluded;
        }
        for source in sources {
            if let Some(e) = self
                .entries
                .get(&(relation.to_owned(), Some(source.to_owned())))
            {
                return Lookup::Mapped(e);
            }
        }
        match self.entries.get(&(relation.to_owned(), None)) {
            Some(e) => Lookup::Mapped(e),
            None => Lookup::Unmapped,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::file(path, e))?;
        Self::read(file)
    }

    pub fn read(reader: impl Read) -> Result<Self> {
        let mut lines = BufReader::new(reader).lines();
        match lines.next().transpose()? {
            Some(h) if h.trim_end_matches('\r') == MAPPING_HEADER => {}
            Some(h) => {
                return Err(Error::malformed(
                    1,
                    format!("expected header {MAPPING_HEADER:?}, found {h:?}"),
                ))
            }
            None => return Err(Error::malformed(1, "empty mapping file")),
        }
        let mut table = MappingTable::new();
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(Error::malformed(
                    line_no,
                    format!("expected 4 tab-separated fields, found {}", fields.len()),
                ));
            }
            let relation = fields[0];
            if relation.is_empty() {
                return Err(Error::malformed(line_no, "empty relation"));
            }
            if fields[1] == EXCLUDED_KEYWORD {
                let Some(prefix) = relation.strip_suffix('*') else {
                    return Err(Error::malformed(
                        line_no,
                        "excluded rows must name a prefix ending in '*'",
                    ));
                };
                table.exclude_prefix(prefix);
                continue;
            }
            let dimension: Dimension = fields[1].parse().map_err(|e: Error| {
                Error::malformed(line_no, e.to_string())
            })?;
            let polarity: Polarity = fields[2]
                .parse()
                .map_err(|m: String| Error::malformed(line_no, m))?;
            let source_scope = fields
                .get(3)
                .filter(|s| !s.is_empty())
                .map(|s| s.to_string());
            table.insert_at(
                MappingEntry {
                    relation: relation.to_owned(),
                    dimension,
                    polarity,
                    source_scope,
                },
                line_no,
            )?;
        }
        Ok(table)
    }

    /// Writes the table in canonical order: entries sorted by `(relation, scope)`,
    /// unscoped first, followed by the excluded prefixes.
    pub fn write(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "{MAPPING_HEADER}")?;
        for e in self.entries.values() {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                e.relation,
                e.dimension,
                e.polarity,
                e.source_scope.as_deref().unwrap_or("")
            )?;
        }
        for p in &self.excluded_prefixes {
            writeln!(out, "{p}*\t{EXCLUDED_KEYWORD}\t\t")?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("mapping fields are UTF-8")
    }

    /// Hex SHA-256 of the canonical TSV serialization.
    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.to_tsv().as_bytes()))
    }
}

pub fn load_mapping(path: impl AsRef<Path>) -> Result<MappingTable> {
    MappingTable::load(path)
}

use Dimension::*;
use Polarity::{Negated as Neg, Positive as Pos};

/// ConceptNet relations (also used by CSKG for Roget, WordNet, Visual Genome and
/// most of Wikidata-CS).
const CONCEPTNET: &[(&str, Dimension, Polarity)] = &[
    ("/r/FormOf", Lexical, Pos),
    ("/r/DerivedFrom", Lexical, Pos),
    ("/r/EtymologicallyDerivedFrom", Lexical, Pos),
    ("/r/Synonym", Similarity, Pos),
    ("/r/SimilarTo", Similarity, Pos),
    ("/r/DefinedAs", Similarity, Pos),
    ("/r/Antonym", Distinctness, Pos),
    ("/r/DistinctFrom", Distinctness, Pos),
    ("/r/IsA", Taxonomic, Pos),
    ("/r/InstanceOf", Taxonomic, Pos),
    ("/r/MannerOf", Taxonomic, Pos),
    ("/r/PartOf", PartWhole, Pos),
    ("/r/HasA", PartWhole, Pos),
    ("/r/MadeOf", PartWhole, Pos),
    // Listed under both part-whole and spatial; resolved to spatial.
    ("/r/AtLocation", Spatial, Pos),
    ("/r/LocatedNear", Spatial, Pos),
    ("/r/CreatedBy", Creation, Pos),
    ("/r/ReceivesAction", Utility, Pos),
    ("/r/UsedFor", Utility, Pos),
    ("/r/CapableOf", Utility, Pos),
    ("/r/NotCapableOf", Utility, Neg),
    ("/r/CausesDesire", DesireGoal, Pos),
    ("/r/MotivatedByGoal", DesireGoal, Pos),
    ("/r/Desires", DesireGoal, Pos),
    ("/r/NotDesires", DesireGoal, Neg),
    ("/r/ObstructedBy", DesireGoal, Pos),
    ("/r/HasProperty", Quality, Pos),
    ("/r/NotHasProperty", Quality, Neg),
    ("/r/SymbolOf", Quality, Pos),
    ("/r/HasFirstSubevent", Temporal, Pos),
    ("/r/HasLastSubevent", Temporal, Pos),
    ("/r/HasSubevent", Temporal, Pos),
    ("/r/HasPrerequisite", Temporal, Pos),
    ("/r/Causes", Temporal, Pos),
    ("/r/Entails", Temporal, Pos),
    ("/r/RelatedTo", RelationalOther, Pos),
    ("/r/HasContext", RelationalOther, Pos),
    ("/r/EtymologicallyRelatedTo", RelationalOther, Pos),
];

const ATOMIC: &[(&str, Dimension)] = &[
    ("at:xIntent", DesireGoal),
    ("at:xWant", DesireGoal),
    ("at:oWant", DesireGoal),
    ("at:xAttr", Quality),
    ("at:xNeed", Temporal),
    ("at:xEffect", Temporal),
    ("at:oEffect", Temporal),
    ("at:xReact", Temporal),
    ("at:oReact", Temporal),
];

/// Native relation names of the other sources, scoped to their source id.
const SCOPED: &[(&str, &str, Dimension)] = &[
    // WordNet
    ("WN", "lemma", Lexical),
    ("WN", "synonym", Similarity),
    ("WN", "antonym", Distinctness),
    ("WN", "hypernym", Taxonomic),
    ("WN", "meronym", PartWhole),
    ("WN", "holonym", PartWhole),
    // Roget
    ("RG", "Synonym", Similarity),
    ("RG", "Antonym", Distinctness),
    // FrameNet
    ("FN", "lexical_unit", Lexical),
    ("FN", "reframing_mapping", Similarity),
    ("FN", "metaphor", Similarity),
    ("FN", "excludes", Distinctness),
    ("FN", "perspective_on", Taxonomic),
    ("FN", "inheritance", Taxonomic),
    ("FN", "using", Utility),
    ("FN", "frame_element", Quality),
    ("FN", "subframe", Temporal),
    ("FN", "precedes", Temporal),
    ("FN", "inchoative_of", Temporal),
    ("FN", "causative_of", Temporal),
    ("FN", "see_also", RelationalOther),
    ("FN", "requires", RelationalOther),
    // Wikidata-CS
    ("WD", "label", Lexical),
    ("WD", "P460", Similarity),  // said to be the same as
    ("WD", "P1889", Distinctness), // different from
    ("WD", "P461", Distinctness), // opposite of
    ("WD", "P279", Taxonomic),   // subclass of
    ("WD", "P31", Taxonomic),    // instance of
    ("WD", "description", Taxonomic),
    ("WD", "P527", PartWhole),   // has part
    ("WD", "P463", PartWhole),   // member of
    ("WD", "P186", PartWhole),   // material used
    ("WD", "P276", Spatial),     // location
    ("WD", "P927", Spatial),     // anatomical location
    ("WD", "P170", Creation),    // creator
    ("WD", "P1535", Utility),    // used by
    ("WD", "P366", Utility),     // use
    ("WD", "P2283", Utility),    // uses
    ("WD", "P462", Quality),     // color
    ("WD", "P1552", Quality),    // has quality
    ("WD", "P828", Temporal),    // has cause
    ("WD", "P1542", Temporal),   // has effect
    ("WD", "P425", RelationalOther), // field of this occupation
    ("WD", "P180", RelationalOther), // depicts
    ("WD", "P1995", RelationalOther), // health specialty
];

/// Built-in mapping covering ConceptNet, ATOMIC, WordNet, Roget, Wikidata-CS
/// and FrameNet relations, excluding the deprecated `/r/dbpedia` relations.
///
/// `comparative` has no entries: its only source is not ingested.
pub fn default_mapping() -> MappingTable {
    let mut table = MappingTable::new();
    let unscoped = CONCEPTNET
        .iter()
        .copied()
        .chain(ATOMIC.iter().map(|&(r, d)| (r, d, Pos)));
    for (relation, dimension, polarity) in unscoped {
        table
            .insert(MappingEntry {
                relation: relation.to_owned(),
                dimension,
                polarity,
                source_scope: None,
            })
            .expect("default mapping has no duplicates");
    }
    for &(scope, relation, dimension) in SCOPED {
        table
            .insert(MappingEntry {
                relation: relation.to_owned(),
                dimension,
                polarity: Pos,
                source_scope: Some(scope.to_owned()),
            })
            .expect("default mapping has no duplicates");
    }
    table.exclude_prefix("/r/dbpedia");
    table
}
