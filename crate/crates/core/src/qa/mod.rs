//! Per-dimension synthetic multiple-choice QA.
//!
//! Every eligible edge becomes one question: its lexicalized sentence with the
//! tail replaced by [`MASK`], the tail as the answer and two sampled
//! distractors. Items are grouped into one bucket per dimension and split into
//! train and dev.

mod distractors;
mod split;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use distractors::{
    content_tokens, CandidatePool, DistractorDraw, DistractorSampler, FilterRules, KgIndex,
    Question, Rejections, DEFAULT_BUDGET,
};
pub use split::{
    dev_quota, split_items, AtomicSplit, OfficialSplit, Split, SplitOptions, SplitReport,
    ATOMIC_SOURCE, DEFAULT_DEV_FRACTION,
};

use crate::dimension::Dimension;
use crate::edge::{Edge, MULTI_VALUE_SEPARATOR};
use crate::error::{Error, Result};
use crate::lexicalize::{fill, node_labels, TemplateTable};

pub const MASK: &str = "[MASK]";
pub const DEFAULT_EXCLUDED_RELATION: &str = "/r/RelatedTo";

/// Stable 64-bit seed for `key` under a global seed.
pub fn derive_seed(seed: u64, key: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(key.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stem {
    pub question: String,
    pub answer: String,
}

pub fn make_stem(edge: &Edge, templates: &TemplateTable) -> Result<Stem> {
    let (head, tail) = node_labels(edge)?;
    Ok(Stem {
        question: fill(&templates.template_for(edge), head, MASK),
        answer: tail.to_owned(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QAItem {
    pub id: String,
    pub question: String,
    pub answer: String,
    pub distractors: [String; 2],
    pub dimension: Dimension,
    pub source: String,
    pub split: Split,
    pub provenance_edge: String,
    pub seed_path: Vec<u64>,
    pub relaxed: bool,
    /// Head label; ATOMIC items use it as the base event.
    #[serde(skip)]
    pub head: String,
}

impl QAItem {
    pub fn has_source(&self, source: &str) -> bool {
        self.source.split(MULTI_VALUE_SEPARATOR).any(|s| s == source)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QABucket {
    pub dimension: Dimension,
    pub train: Vec<QAItem>,
    pub dev: Vec<QAItem>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BucketCount {
    pub train: u64,
    pub dev: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct QAReport {
    pub buckets: BTreeMap<Dimension, BucketCount>,
    pub input_edges: u64,
    pub excluded_relation: u64,
    pub no_dimension: u64,
    pub duplicate_id: u64,
    pub unlexicalizable: u64,
    pub insufficient_distractors: u64,
    pub relaxed: u64,
    pub split: SplitReport,
}

impl QAReport {
    pub fn total_items(&self) -> u64 {
        self.buckets.values().map(|c| c.train + c.dev).sum()
    }

    /// `dimension\ttrain\tdev` rows in dimension order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("dimension\ttrain\tdev\n");
        for (d, c) in &self.buckets {
            out.push_str(&format!("{d}\t{}\t{}\n", c.train, c.dev));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub exclude_relations: HashSet<String>,
    pub seed: u64,
    pub split: SplitOptions,
    pub rules: FilterRules,
    pub budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            exclude_relations: [DEFAULT_EXCLUDED_RELATION.to_owned()].into(),
            seed: 0,
            split: SplitOptions::default(),
            rules: FilterRules::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl BuildOptions {
    pub fn with_seed(seed: u64) -> Self {
        let mut o = BuildOptions {
            seed,
            ..Default::default()
        };
        o.split.seed = seed;
        o
    }
}

/// Builds one bucket per dimension present among the eligible edges.
///
/// Eligible edges carry a dimension, use a relation outside
/// `exclude_relations` and have an id not seen before. The knowledge-graph
/// index used to reject true facts covers every input edge.
pub fn build_buckets(
    edges: &[Edge],
    templates: &TemplateTable,
    options: &BuildOptions,
) -> Result<(Vec<QABucket>, QAReport)> {
    let mut report = QAReport {
        input_edges: edges.len() as u64,
        ..Default::default()
    };
    let mut seen = HashSet::new();
    let mut eligible: Vec<&Edge> = Vec::new();
    for e in edges {
        if e.dimension.is_none() {
            report.no_dimension += 1;
        } else if options.exclude_relations.contains(&e.relation) {
            report.excluded_relation += 1;
        } else if !seen.insert(e.id.as_str()) {
            report.duplicate_id += 1;
        } else {
            eligible.push(e);
        }
    }

    let kg = KgIndex::build(edges);
    let pool = CandidatePool::build(eligible.iter().copied());
    let sampler = DistractorSampler {
        pool: &pool,
        kg: &kg,
        rules: options.rules,
        budget: options.budget,
    };

    enum Outcome {
        Item(Box<QAItem>),
        Unlexicalizable,
        NoDistractors,
    }

    let outcomes: Vec<Outcome> = eligible
        .par_iter()
        .map(|e| {
            let Ok(stem) = make_stem(e, templates) else {
                return Outcome::Unlexicalizable;
            };
            let q = Question {
                head: e.head_label(),
                relation: &e.relation,
                answer: &stem.answer,
            };
            match sampler.sample(q, derive_seed(options.seed, &e.id)) {
                Some(draw) => Outcome::Item(Box::new(QAItem {
                    id: format!("qa:{}", e.id),
                    question: stem.question,
                    answer: stem.answer,
                    distractors: draw.distractors,
                    dimension: e.dimension.expect("eligible edges have a dimension"),
                    source: e.source.clone(),
                    split: Split::Train,
                    provenance_edge: e.id.clone(),
                    seed_path: draw.seed_path,
                    relaxed: draw.relaxed,
                    head: e.head_label().to_owned(),
                })),
                None => Outcome::NoDistractors,
            }
        })
        .collect();

    let mut items = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        match o {
            Outcome::Item(i) => {
                report.relaxed += u64::from(i.relaxed);
                items.push(*i);
            }
            Outcome::Unlexicalizable => report.unlexicalizable += 1,
            Outcome::NoDistractors => report.insufficient_distractors += 1,
        }
    }

    let split_options = SplitOptions {
        seed: options.seed,
        ..options.split.clone()
    };
    report.split = split_items(&mut items, &split_options)?;

    let mut buckets: BTreeMap<Dimension, QABucket> = BTreeMap::new();
    for item in items {
        let b = buckets.entry(item.dimension).or_insert_with(|| QABucket {
            dimension: item.dimension,
            train: Vec::new(),
            dev: Vec::new(),
        });
        let count = report.buckets.entry(item.dimension).or_default();
        match item.split {
            Split::Train => {
                count.train += 1;
                b.train.push(item);
            }
            Split::Dev => {
                count.dev += 1;
                b.dev.push(item);
            }
        }
    }
    Ok((buckets.into_values().collect(), report))
}

pub fn write_jsonl<'a>(items: impl IntoIterator<Item = &'a QAItem>, mut out: impl Write) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// File name of one bucket split, e.g. `taxonomic_train.jsonl`.
pub fn bucket_file_name(dimension: Dimension, split: Split) -> String {
    format!("{}_{}.jsonl", dimension, split.name())
}

/// Writes `<dimension>_{train,dev}.jsonl` for every bucket plus `report.tsv`
/// and `report.json` into an existing directory.
pub fn write_buckets(dir: &Path, buckets: &[QABucket], report: &QAReport) -> Result<()> {
    for b in buckets {
        for (split, items) in [(Split::Train, &b.train), (Split::Dev, &b.dev)] {
            let path = dir.join(bucket_file_name(b.dimension, split));
            let file = fs::File::create(&path).map_err(|e| Error::file(&path, e))?;
            let mut w = BufWriter::new(file);
            write_jsonl(items, &mut w)?;
            w.flush()?;
        }
    }
    fs::write(dir.join("report.tsv"), report.to_tsv())?;
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    fs::write(dir.join("report.json"), json)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicalize::default_templates;
    use Dimension::*;

    #[test]
    fn stems() {
        let t = default_templates();
        let e = Edge::simple("e", "food", "/r/CapableOf", "go rotten", "CN");
        let s = make_stem(&e, &t).unwrap();
        assert_eq!(s.question, "food is capable of [MASK]");
        assert_eq!(s.answer, "go rotten");

        let e = Edge::simple("a", "PersonX bakes bread", "at:xEffect", "eat food", "AT");
        let s = make_stem(&e, &t).unwrap();
        assert_eq!(s.question, "PersonX bakes bread. As a result, [MASK]");
        assert_eq!(s.answer, "eat food");

        let mut e = Edge::simple("bad", "food", "/r/CapableOf", "x", "CN");
        e.node2_label.clear();
        assert!(make_stem(&e, &t).is_err());
    }

    #[test]
    fn derive_seed_is_stable() {
        assert_eq!(derive_seed(0, "e1"), derive_seed(0, "e1"));
        assert_ne!(derive_seed(0, "e1"), derive_seed(1, "e1"));
        assert_ne!(derive_seed(0, "e1"), derive_seed(0, "e2"));
    }

    #[test]
    fn empty_input_gives_no_buckets() {
        let (b, r) = build_buckets(&[], &default_templates(), &BuildOptions::default()).unwrap();
        assert!(b.is_empty());
        assert!(r.buckets.is_empty());
        assert_eq!(r.to_tsv(), "dimension\ttrain\tdev\n");
    }

    #[test]
    fn related_to_is_excluded() {
        let edges: Vec<Edge> = (0..5)
            .map(|i| {
                Edge::simple(&format!("r{i}"), &format!("h{i}"), "/r/RelatedTo", &format!("t{i}"), "CN")
                    .with_dimension(RelationalOther)
            })
            .chain((0..5).map(|i| {
                Edge::simple(&format!("u{i}"), &format!("h{i}"), "/r/UsedFor", &format!("purpose{i}"), "CN")
                    .with_dimension(Utility)
            }))
            .collect();
        let (buckets, report) =
            build_buckets(&edges, &default_templates(), &BuildOptions::default()).unwrap();
        assert_eq!(report.excluded_relation, 5);
        assert_eq!(buckets.len(), 1);
        assert_eq!(buckets[0].dimension, Utility);
        assert_eq!(buckets[0].train.len() + buckets[0].dev.len(), 5);
    }
}
