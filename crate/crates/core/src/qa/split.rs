//! Train/dev assignment.
//!
//! Items are split per dimension. Hash-split items are ordered by a seeded
//! hash of their provenance edge and the first `round(n * dev_fraction)` go to
//! dev, so the quota is exact. ATOMIC items follow the official split of their
//! base event when a split file is supplied.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{derive_seed, QAItem};
use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::overlap::normalize_node;

pub const ATOMIC_SOURCE: &str = "AT";
pub const DEFAULT_DEV_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
        }
    }
}

/// Entry of the official ATOMIC split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfficialSplit {
    Train,
    Dev,
    Test,
}

impl FromStr for OfficialSplit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "train" | "trn" => Ok(OfficialSplit::Train),
            "dev" => Ok(OfficialSplit::Dev),
            "test" | "tst" => Ok(OfficialSplit::Test),
            other => Err(format!("unknown split {other:?}; expected train, dev or test")),
        }
    }
}

/// Base event -> official split. Events are matched after node normalization.
#[derive(Debug, Clone, Default)]
pub struct AtomicSplit {
    events: HashMap<String, OfficialSplit>,
}

impl AtomicSplit {
    pub fn insert(&mut self, event: &str, split: OfficialSplit) {
        self.events.insert(normalize_node(event), split);
    }

    pub fn get(&self, event: &str) -> Option<OfficialSplit> {
        self.events.get(&normalize_node(event)).copied()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Reads `event\tsplit` rows; an `event\tsplit` header line is skipped.
    pub fn read(reader: impl Read) -> Result<Self> {
        let mut out = AtomicSplit::default();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || (i == 0 && line == "event\tsplit") {
                continue;
            }
            let (event, split) = line
                .rsplit_once('\t')
                .ok_or_else(|| Error::malformed(i + 1, "expected event<TAB>split"))?;
            let split = split
                .trim()
                .parse()
                .map_err(|m: String| Error::malformed(i + 1, m))?;
            out.insert(event, split);
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::file(path, e))?;
        Self::read(file)
    }
}

#[derive(Debug, Clone)]
pub struct SplitOptions {
    pub dev_fraction: f64,
    pub seed: u64,
    /// Route ATOMIC items through the official split.
    pub source_aware: bool,
    pub atomic_split: Option<AtomicSplit>,
    /// Fail instead of falling back to hashing for ATOMIC items without an
    /// official split.
    pub strict: bool,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            dev_fraction: DEFAULT_DEV_FRACTION,
            seed: 0,
            source_aware: true,
            atomic_split: None,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub hashed: u64,
    pub official: u64,
    /// ATOMIC items whose event is in the official test split; dropped.
    pub held_out: u64,
    /// ATOMIC items split by hash because no official assignment was available.
    pub atomic_fallback: u64,
}

pub fn dev_quota(n: usize, dev_fraction: f64) -> usize {
    ((n as f64) * dev_fraction).round() as usize
}

/// Sets `split` on every item and removes ATOMIC items of the official test
/// split.
pub fn split_items(items: &mut Vec<QAItem>, options: &SplitOptions) -> Result<SplitReport> {
    if !(options.dev_fraction > 0.0 && options.dev_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "dev fraction must be in (0, 1), got {}",
            options.dev_fraction
        )));
    }
    let mut report = SplitReport::default();
    let mut keep = vec![true; items.len()];
    let mut hashed: BTreeMap<Dimension, Vec<usize>> = BTreeMap::new();

    for (i, item) in items.iter_mut().enumerate() {
        let atomic = options.source_aware && item.has_source(ATOMIC_SOURCE);
        if atomic {
            let official = match &options.atomic_split {
                Some(table) => table.get(&item.head),
                None if options.strict => {
                    return Err(Error::InvalidArgument(
                        "ATOMIC items present but no official split file given".into(),
                    ))
                }
                None => None,
            };
            match official {
                Some(OfficialSplit::Train) => {
                    item.split = Split::Train;
                    report.official += 1;
                    continue;
                }
                Some(OfficialSplit::Dev) => {
                    item.split = Split::Dev;
                    report.official += 1;
                    continue;
                }
                Some(OfficialSplit::Test) => {
                    keep[i] = false;
                    report.held_out += 1;
                    continue;
                }
                None if options.strict => {
                    return Err(Error::InvalidArgument(format!(
                        "ATOMIC event {:?} (edge {}) is not in the official split",
                        item.head, item.provenance_edge
                    )))
                }
                None => report.atomic_fallback += 1,
            }
        }
        hashed.entry(item.dimension).or_default().push(i);
    }

    for (_, mut idx) in hashed {
        idx.sort_by_cached_key(|&i| {
            let edge = &items[i].provenance_edge;
            (derive_seed(options.seed, &format!("split\t{edge}")), edge.clone())
        });
        let quota = dev_quota(idx.len(), options.dev_fraction);
        for (rank, &i) in idx.iter().enumerate() {
            items[i].split = if rank < quota { Split::Dev } else { Split::Train };
        }
        report.hashed += idx.len() as u64;
    }

    let mut flags = keep.into_iter();
    items.retain(|_| flags.next().expect("one flag per item"));
    Ok(report)
}
