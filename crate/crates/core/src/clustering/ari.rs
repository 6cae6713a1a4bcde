use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

fn pairs(n: u64) -> f64 {
    (n as f64) * (n.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index of two labelings of the same items (`a[i]` and `b[i]`
/// label item `i`), by pair counting over the contingency table.
///
/// When the index is degenerate (max index equals expected index) the result is
/// 1 for identical groupings and 0 otherwise.
pub fn ari_from_labels<A, B>(a: &[A], b: &[B]) -> f64
where
    A: Eq + Hash,
    B: Eq + Hash,
{
    assert_eq!(a.len(), b.len(), "labelings must cover the same items");
    let mut cells: HashMap<(&A, &B), u64> = HashMap::new();
    let mut rows: HashMap<&A, u64> = HashMap::new();
    let mut cols: HashMap<&B, u64> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        *cells.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = cells.values().map(|&n| pairs(n)).sum();
    let sum_a: f64 = rows.values().map(|&n| pairs(n)).sum();
    let sum_b: f64 = cols.values().map(|&n| pairs(n)).sum();
    let total = pairs(a.len() as u64);
    let expected = if total > 0.0 { sum_a * sum_b / total } else { 0.0 };
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        // Same grouping iff every row and column maps to exactly one cell.
        let identical = cells.len() == rows.len() && cells.len() == cols.len();
        return if identical { 1.0 } else { 0.0 };
    }
    (index - expected) / (max - expected)
}

/// ARI between two id -> label maps; the id sets must be equal.
pub fn adjusted_rand_index<A, B>(pa: &HashMap<String, A>, pb: &HashMap<String, B>) -> Result<f64>
where
    A: Eq + Hash,
    B: Eq + Hash,
{
    if pa.len() != pb.len() {
        return Err(Error::IdMismatch(format!(
            "{} ids vs {} ids",
            pa.len(),
            pb.len()
        )));
    }
    let mut la = Vec::with_capacity(pa.len());
    let mut lb = Vec::with_capacity(pa.len());
    for (id, a) in pa {
        let b = pb
            .get(id)
            .ok_or_else(|| Error::IdMismatch(format!("id {id:?} missing from second partition")))?;
        la.push(a);
        lb.push(b);
    }
    Ok(ari_from_labels(&la, &lb))
}
