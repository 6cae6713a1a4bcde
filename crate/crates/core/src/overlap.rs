//! Cross-source triple overlap.
//!
//! Edges are compared through their node labels: each triple becomes
//! `(head key, relation or dimension, tail key)` and overlap between two
//! sources is the Jaccard score of their distinct triple sets.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::dimension::Dimension;
use crate::edge::Edge;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMode {
    Relation,
    Dimension,
}

impl OverlapMode {
    pub fn name(self) -> &'static str {
        match self {
            OverlapMode::Relation => "relation",
            OverlapMode::Dimension => "dimension",
        }
    }
}

impl fmt::Display for OverlapMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OverlapMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "relation" => Ok(OverlapMode::Relation),
            "dimension" => Ok(OverlapMode::Dimension),
            other => Err(format!("unknown mode {other:?}; expected relation or dimension")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelKey {
    Relation(String),
    Dimension(Dimension),
}

impl RelKey {
    pub fn dimension(&self) -> Option<Dimension> {
        match self {
            RelKey::Dimension(d) => Some(*d),
            RelKey::Relation(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalizedTriple {
    pub head: String,
    pub rel: RelKey,
    pub tail: String,
}

pub type TripleSet = HashSet<NormalizedTriple>;

/// Label key used for cross-source node identity.
///
/// Takes the first `|`-separated label, trims it, reduces WordNet sense names
/// (`comfort_food.n.01`) to their lemma, collapses whitespace runs and
/// case-folds.
pub fn normalize_node(label: &str) -> String {
    let first = label.split('|').next().unwrap_or_default().trim();
    let lemma_owned;
    let base = match wordnet_lemma(first) {
        Some(lemma) => {
            lemma_owned = lemma.replace('_', " ");
            lemma_owned.as_str()
        }
        None => first,
    };
    let mut out = String::with_capacity(base.len());
    for word in base.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        for c in word.chars() {
            fold_char(c, &mut out);
        }
    }
    out
}

/// Per-character lowercase mapping, without context-sensitive final sigma.
fn fold_char(c: char, out: &mut String) {
    match c {
        'ς' => out.push('σ'),
        c => out.extend(c.to_lowercase()),
    }
}

/// `lemma.pos.NN` with pos one of n, v, a, s, r.
fn wordnet_lemma(label: &str) -> Option<&str> {
    let (rest, sense) = label.rsplit_once('.')?;
    let (lemma, pos) = rest.rsplit_once('.')?;
    let is_sense = sense.len() == 2 && sense.bytes().all(|b| b.is_ascii_digit());
    let is_pos = matches!(pos, "n" | "v" | "a" | "s" | "r");
    (is_sense && is_pos && !lemma.is_empty() && !lemma.contains(char::is_whitespace))
        .then_some(lemma)
}

/// Normalized triple of one edge; `None` in dimension mode for dimensionless edges.
pub fn normalize_edge(edge: &Edge, mode: OverlapMode) -> Option<NormalizedTriple> {
    let rel = match mode {
        OverlapMode::Relation => RelKey::Relation(edge.relation.clone()),
        OverlapMode::Dimension => RelKey::Dimension(edge.dimension?),
    };
    Some(NormalizedTriple {
        head: normalize_node(&edge.node1_label),
        rel,
        tail: normalize_node(&edge.node2_label),
    })
}

/// Distinct normalized triples of `edges`, plus the number of edges skipped
/// for lacking a dimension (dimension mode only).
pub fn triple_set(edges: &[Edge], mode: OverlapMode) -> (TripleSet, u64) {
    edges
        .par_iter()
        .fold(
            || (TripleSet::new(), 0u64),
            |(mut set, mut skipped), e| {
                match normalize_edge(e, mode) {
                    Some(t) => {
                        set.insert(t);
                    }
                    None => skipped += 1,
                }
                (set, skipped)
            },
        )
        .reduce(
            || (TripleSet::new(), 0),
            |(a, sa), (b, sb)| {
                if a.len() < b.len() {
                    return merge_into(b, a, sa + sb);
                }
                merge_into(a, b, sa + sb)
            },
        )
}

fn merge_into(mut big: TripleSet, small: TripleSet, skipped: u64) -> (TripleSet, u64) {
    big.extend(small);
    (big, skipped)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JaccardScore {
    pub intersection: u64,
    pub union: u64,
    pub jaccard: f64,
}

impl JaccardScore {
    pub fn from_counts(intersection: u64, union: u64) -> Self {
        let jaccard = if union == 0 {
            0.0
        } else {
            intersection as f64 / union as f64
        };
        JaccardScore {
            intersection,
            union,
            jaccard,
        }
    }
}

/// Exact set Jaccard. Two empty sets score 0.
pub fn jaccard<T: Eq + std::hash::Hash>(a: &HashSet<T>, b: &HashSet<T>) -> JaccardScore {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let intersection = small.iter().filter(|t| large.contains(t)).count() as u64;
    let union = (a.len() + b.len()) as u64 - intersection;
    JaccardScore::from_counts(intersection, union)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport {
    pub source_a: String,
    pub source_b: String,
    pub mode: OverlapMode,
    pub size_a: u64,
    pub size_b: u64,
    #[serde(flatten)]
    pub score: JaccardScore,
    /// Dimension mode only. A dimension is absent when either source has no
    /// triples of it.
    pub per_dimension: BTreeMap<Dimension, JaccardScore>,
}

/// One report per unordered pair of `sources`, in list order.
///
/// An edge belongs to every source id in its `source` field.
pub fn pairwise_overlap(
    edges: &[Edge],
    sources: &[&str],
    mode: OverlapMode,
) -> Result<Vec<OverlapReport>> {
    if sources.len() < 2 {
        return Err(Error::InvalidArgument(
            "overlap needs at least two sources".into(),
        ));
    }
    let mut unique = HashSet::new();
    for s in sources {
        if !unique.insert(*s) {
            return Err(Error::InvalidArgument(format!("source {s:?} listed twice")));
        }
    }

    for s in sources {
        if !edges.iter().any(|e| e.has_source(s)) {
            return Err(Error::UnknownSource((*s).to_owned()));
        }
    }

    let mut sets: HashMap<&str, TripleSet> = sources.iter().map(|s| (*s, TripleSet::new())).collect();
    let per_source: Vec<(usize, NormalizedTriple)> = edges
        .par_iter()
        .filter_map(|e| {
            let t = normalize_edge(e, mode)?;
            let idx: Vec<usize> = sources
                .iter()
                .enumerate()
                .filter(|(_, s)| e.has_source(s))
                .map(|(i, _)| i)
                .collect();
            Some(idx.into_iter().map(move |i| (i, t.clone())).collect::<Vec<_>>())
        })
        .flatten()
        .collect();
    for (i, t) in per_source {
        sets.get_mut(sources[i]).expect("known source").insert(t);
    }

    let by_dim: HashMap<&str, BTreeMap<Dimension, TripleSet>> = if mode == OverlapMode::Dimension {
        sets.iter()
            .map(|(s, set)| {
                let mut split: BTreeMap<Dimension, TripleSet> = BTreeMap::new();
                for t in set {
                    if let Some(d) = t.rel.dimension() {
                        split.entry(d).or_default().insert(t.clone());
                    }
                }
                (*s, split)
            })
            .collect()
    } else {
        HashMap::new()
    };

    let mut reports = Vec::new();
    for (i, a) in sources.iter().enumerate() {
        for b in &sources[i + 1..] {
            let (sa, sb) = (&sets[a], &sets[b]);
            let mut per_dimension = BTreeMap::new();
            if mode == OverlapMode::Dimension {
                let (da, db) = (&by_dim[a], &by_dim[b]);
                for (d, ta) in da {
                    if let Some(tb) = db.get(d) {
                        per_dimension.insert(*d, jaccard(ta, tb));
                    }
                }
            }
            reports.push(OverlapReport {
                source_a: (*a).to_owned(),
                source_b: (*b).to_owned(),
                mode,
                size_a: sa.len() as u64,
                size_b: sb.len() as u64,
                score: jaccard(sa, sb),
                per_dimension,
            });
        }
    }
    Ok(reports)
}

pub const REPORT_HEADER: &str = "sourceA,sourceB,mode,dimension,intersection,union,jaccard";

/// CSV with one `ALL` row per pair followed by its per-dimension rows.
pub fn write_report_csv(reports: &[OverlapReport], mut out: impl Write) -> Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for r in reports {
        let rows = std::iter::once(("ALL".to_owned(), r.score))
            .chain(r.per_dimension.iter().map(|(d, s)| (d.to_string(), *s)));
        for (dim, s) in rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{:.6}",
                r.source_a, r.source_b, r.mode, dim, s.intersection, s.union, s.jaccard
            )?;
        }
    }
    Ok(())
}
