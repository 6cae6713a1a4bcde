//! Distractor sampling with heuristic filtering.
//!
//! Candidates are tails of other edges with the same relation. A candidate is
//! rejected when
//!
//! * (a) it equals the answer (or an already chosen distractor) after node
//!   normalization,
//! * (b) the knowledge graph already links the question head to it through the
//!   same relation, or
//! * (c) it shares a content word with the answer.
//!
//! Draws come from a seeded sample of the pool. When fewer than two candidates
//! survive the budget, the same draws are re-examined with rule (c) switched
//! off.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::edge::Edge;
use crate::overlap::normalize_node;

pub const DEFAULT_BUDGET: usize = 64;

const STOPWORDS: &[&str] = &[
    "a", "about", "after", "all", "an", "and", "any", "are", "as", "at", "be", "been", "before",
    "being", "but", "by", "can", "could", "do", "does", "for", "from", "get", "gets", "go",
    "has", "have", "he", "her", "his", "i", "if", "in", "into", "is", "it", "its", "just",
    "may", "me", "more", "my", "not", "of", "off", "on", "one", "or", "other", "others", "our",
    "out", "over", "person", "personx", "persony", "personz", "she", "so", "some", "someone",
    "something", "than", "that", "the", "their", "them", "then", "there", "they", "this", "to",
    "up", "very", "was", "we", "were", "what", "when", "which", "who", "will", "with", "would",
    "you", "your",
];

/// Lowercased alphanumeric words of `text` that are not stopwords.
pub fn content_tokens(text: &str) -> HashSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .filter(|w| !STOPWORDS.contains(&w.as_str()))
        .collect()
}

/// Set of normalized `(head, relation, tail)` facts.
#[derive(Debug, Clone, Default)]
pub struct KgIndex {
    facts: HashMap<(String, String), HashSet<String>>,
}

impl KgIndex {
    pub fn build<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> Self {
        let mut facts: HashMap<(String, String), HashSet<String>> = HashMap::new();
        for e in edges {
            facts
                .entry((normalize_node(&e.node1_label), e.relation.clone()))
                .or_default()
                .insert(normalize_node(&e.node2_label));
        }
        KgIndex { facts }
    }

    /// `head` and `tail` are normalized keys.
    pub fn contains(&self, head: &str, relation: &str, tail: &str) -> bool {
        self.facts
            .get(&(head.to_owned(), relation.to_owned()))
            .is_some_and(|tails| tails.contains(tail))
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    text: String,
    key: String,
    tokens: HashSet<String>,
}

/// Distinct tails per relation, ordered by normalized key.
#[derive(Debug, Clone, Default)]
pub struct CandidatePool {
    by_relation: HashMap<String, Vec<Candidate>>,
}

impl CandidatePool {
    pub fn build<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> Self {
        let mut grouped: HashMap<String, BTreeMap<String, String>> = HashMap::new();
        for e in edges {
            let text = e.tail_label();
            let key = normalize_node(text);
            if key.is_empty() {
                continue;
            }
            let slot = grouped.entry(e.relation.clone()).or_default();
            // Keep the lexicographically smallest surface form per key.
            match slot.get(&key) {
                Some(existing) if existing.as_str() <= text => {}
                _ => {
                    slot.insert(key, text.to_owned());
                }
            }
        }
        let by_relation = grouped
            .into_iter()
            .map(|(r, m)| {
                let cands = m
                    .into_iter()
                    .map(|(key, text)| Candidate {
                        tokens: content_tokens(&text),
                        text,
                        key,
                    })
                    .collect();
                (r, cands)
            })
            .collect();
        CandidatePool { by_relation }
    }

    pub fn len(&self, relation: &str) -> usize {
        self.by_relation.get(relation).map_or(0, Vec::len)
    }
}

/// Which filtering rules are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterRules {
    pub reject_answer_match: bool,
    pub reject_known_triple: bool,
    pub reject_shared_token: bool,
}

impl Default for FilterRules {
    fn default() -> Self {
        FilterRules {
            reject_answer_match: true,
            reject_known_triple: true,
            reject_shared_token: true,
        }
    }
}

/// Rejection counts per rule, for the per-item log.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Rejections {
    pub answer_match: u32,
    pub known_triple: u32,
    pub shared_token: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistractorDraw {
    pub distractors: [String; 2],
    /// Pool indices of the accepted candidates, in acceptance order.
    pub seed_path: Vec<u64>,
    /// Rule (c) had to be relaxed.
    pub relaxed: bool,
    pub rejections: Rejections,
}

/// What a distractor must be checked against.
#[derive(Debug, Clone, Copy)]
pub struct Question<'a> {
    pub head: &'a str,
    pub relation: &'a str,
    pub answer: &'a str,
}

#[derive(Debug, Clone)]
pub struct DistractorSampler<'a> {
    pub pool: &'a CandidatePool,
    pub kg: &'a KgIndex,
    pub rules: FilterRules,
    pub budget: usize,
}

impl<'a> DistractorSampler<'a> {
    pub fn new(pool: &'a CandidatePool, kg: &'a KgIndex) -> Self {
        DistractorSampler {
            pool,
            kg,
            rules: FilterRules::default(),
            budget: DEFAULT_BUDGET,
        }
    }

    /// Samples two distractors; `None` when fewer than two survive even
    /// after relaxation.
    pub fn sample(&self, q: Question<'_>, item_seed: u64) -> Option<DistractorDraw> {
        let pool = self.pool.by_relation.get(q.relation)?;
        if pool.len() < 2 {
            return None;
        }
        let head_key = normalize_node(q.head);
        let answer_key = normalize_node(q.answer);
        let answer_tokens = content_tokens(q.answer);

        let mut rng = ChaCha8Rng::seed_from_u64(item_seed);
        let draws = index::sample(&mut rng, pool.len(), self.budget.min(pool.len())).into_vec();

        let mut chosen: Vec<usize> = Vec::with_capacity(2);
        let mut rejections = Rejections::default();
        let mut relaxed = false;
        for strict_tokens in [true, false] {
            if !strict_tokens {
                if !self.rules.reject_shared_token {
                    break;
                }
                relaxed = true;
            }
            for &i in &draws {
                if chosen.len() == 2 {
                    break;
                }
                if chosen.contains(&i) {
                    continue;
                }
                let c = &pool[i];
                if self.rules.reject_answer_match
                    && (c.key == answer_key || chosen.iter().any(|&j| pool[j].key == c.key))
                {
                    rejections.answer_match += 1;
                    continue;
                }
                if self.rules.reject_known_triple && self.kg.contains(&head_key, q.relation, &c.key)
                {
                    rejections.known_triple += 1;
                    continue;
                }
                if strict_tokens
                    && self.rules.reject_shared_token
                    && !c.tokens.is_disjoint(&answer_tokens)
                {
                    rejections.shared_token += 1;
                    continue;
                }
                chosen.push(i);
            }
            if chosen.len() == 2 {
                break;
            }
        }
        if chosen.len() < 2 {
            return None;
        }
        Some(DistractorDraw {
            distractors: [pool[chosen[0]].text.clone(), pool[chosen[1]].text.clone()],
            seed_path: chosen.iter().map(|&i| i as u64).collect(),
            relaxed,
            rejections,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges() -> Vec<Edge> {
        vec![
            Edge::simple("1", "food", "/r/AtLocation", "pantry", "CN"),
            Edge::simple("2", "milk", "/r/AtLocation", "fridge", "CN"),
            Edge::simple("3", "car", "/r/AtLocation", "garage", "CN"),
            Edge::simple("4", "book", "/r/AtLocation", "library", "CN"),
            Edge::simple("5", "food", "/r/CapableOf", "go rotten", "CN"),
            Edge::simple("6", "knife", "/r/CapableOf", "cut bread", "CN"),
            Edge::simple("7", "bread", "/r/CapableOf", "go stale", "CN"),
            Edge::simple("8", "dog", "/r/CapableOf", "bark", "CN"),
            Edge::simple("9", "bird", "/r/CapableOf", "fly", "CN"),
        ]
    }

    #[test]
    fn tokens_drop_stopwords() {
        let t = content_tokens("Go to the Store");
        assert_eq!(t, ["store".to_owned()].into());
    }

    #[test]
    fn rules_hold_for_many_seeds() {
        let e = edges();
        let (pool, kg) = (CandidatePool::build(&e), KgIndex::build(&e));
        let s = DistractorSampler::new(&pool, &kg);
        let q = Question {
            head: "food",
            relation: "/r/AtLocation",
            answer: "fridge",
        };
        for seed in 0..50 {
            let d = s.sample(q, seed).unwrap();
            for x in &d.distractors {
                assert_ne!(x, "fridge");
                // (food, AtLocation, pantry) is a known fact.
                assert_ne!(x, "pantry");
            }
            assert_ne!(d.distractors[0], d.distractors[1]);
        }
    }

    #[test]
    fn shared_tokens_rejected_before_relaxation() {
        let e = edges();
        let (pool, kg) = (CandidatePool::build(&e), KgIndex::build(&e));
        let s = DistractorSampler::new(&pool, &kg);
        let q = Question {
            head: "milk",
            relation: "/r/CapableOf",
            answer: "go sour bread",
        };
        for seed in 0..20 {
            let d = s.sample(q, seed).unwrap();
            assert!(!d.relaxed);
            assert!(d.distractors.iter().all(|x| !x.contains("bread")));
        }
    }

    #[test]
    fn relaxation_kicks_in_when_needed() {
        let e = vec![
            Edge::simple("1", "a", "r", "red apple", "CN"),
            Edge::simple("2", "b", "r", "green apple", "CN"),
            Edge::simple("3", "c", "r", "apple pie", "CN"),
        ];
        let (pool, kg) = (CandidatePool::build(&e), KgIndex::build(&e));
        let s = DistractorSampler::new(&pool, &kg);
        let d = s
            .sample(
                Question {
                    head: "x",
                    relation: "r",
                    answer: "sour apple",
                },
                1,
            )
            .unwrap();
        assert!(d.relaxed);
        assert!(d.rejections.shared_token >= 3);
    }

    #[test]
    fn too_small_pool_is_dropped() {
        let e = vec![
            Edge::simple("1", "a", "r", "x", "CN"),
            Edge::simple("2", "b", "r", "y", "CN"),
        ];
        let (pool, kg) = (CandidatePool::build(&e), KgIndex::build(&e));
        let s = DistractorSampler::new(&pool, &kg);
        let q = Question {
            head: "a",
            relation: "r",
            answer: "x",
        };
        // Only "y" is eligible.
        assert!(s.sample(q, 0).is_none());
        assert!(s
            .sample(
                Question {
                    relation: "missing",
                    ..q
                },
                0
            )
            .is_none());
    }

    #[test]
    fn same_seed_same_draw() {
        let e = edges();
        let (pool, kg) = (CandidatePool::build(&e), KgIndex::build(&e));
        let s = DistractorSampler::new(&pool, &kg);
        let q = Question {
            head: "food",
            relation: "/r/CapableOf",
            answer: "go rotten",
        };
        assert_eq!(s.sample(q, 9), s.sample(q, 9));
        let reversed: Vec<Edge> = edges().into_iter().rev().collect();
        let (pool2, kg2) = (CandidatePool::build(&reversed), KgIndex::build(&reversed));
        assert_eq!(
            s.sample(q, 9),
            DistractorSampler::new(&pool2, &kg2).sample(q, 9)
        );
    }
}
