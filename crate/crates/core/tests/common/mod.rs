#![allow(dead_code)]

pub mod transcription;

use std::fs;
use std::path::PathBuf;

use kgdim::ingest::read_all;
use kgdim::{assign_dimensions, default_mapping, Edge, ReadOptions};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    fs::read_to_string(fixture(name)).unwrap()
}

/// Fixture edges with dimensions assigned by the default mapping.
pub fn food_edges() -> Vec<Edge> {
    let text = fixture_text("food_edges.tsv");
    let (edges, stats) = read_all(text.as_bytes(), ReadOptions::strict()).unwrap();
    assert!(stats.errors.is_empty());
    assign_dimensions(edges, &default_mapping()).0
}

/// Minimal normalizer written independently of the library: first label,
/// WordNet sense name to lemma, whitespace collapsed, lowercase.
pub fn norm(label: &str) -> String {
    let first = label.split('|').next().unwrap().trim();
    let parts: Vec<&str> = first.rsplitn(3, '.').collect();
    let base = if parts.len() == 3
        && parts[0].len() == 2
        && parts[0].chars().all(|c| c.is_ascii_digit())
        && ["n", "v", "a", "s", "r"].contains(&parts[1])
        && !parts[2].contains(' ')
    {
        parts[2].replace('_', " ")
    } else {
        first.to_string()
    };
    base.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}
