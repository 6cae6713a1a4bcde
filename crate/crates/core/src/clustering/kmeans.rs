//! Lloyd's k-means with k-means++ seeding.
//!
//! Points are processed in lexicographic id order, so the result depends only on
//! the set of (id, vector) pairs and the seed, never on input row order or the
//! number of worker threads. Distances are squared Euclidean.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::vectors::VectorTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansParams {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Stop once no centroid moves farther than this (Euclidean distance).
    pub tol: f64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        KMeansParams {
            k: 13,
            seed: 0,
            max_iter: 300,
            tol: 1e-4,
        }
    }
}

impl KMeansParams {
    pub fn with_k(k: usize) -> Self {
        KMeansParams {
            k,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clustering {
    pub k: usize,
    /// Sorted ids; `labels[i]` is the cluster of `ids[i]`.
    pub ids: Vec<String>,
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    /// Inertia after every centroid update, then after the final assignment.
    pub inertia_history: Vec<f64>,
    pub seed: u64,
    pub iterations: usize,
}

impl Clustering {
    pub fn cluster_of(&self, id: &str) -> Option<usize> {
        self.ids
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .ok()
            .map(|i| self.labels[i])
    }

    pub fn assignments(&self) -> impl Iterator<Item = (&str, usize)> {
        self.ids.iter().map(String::as_str).zip(self.labels.iter().copied())
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

fn sq_dist(a: &[f32], c: &[f64]) -> f64 {
    a.iter()
        .zip(c)
        .map(|(&x, &y)| {
            let d = x as f64 - y;
            d * d
        })
        .sum()
}

/// Index of the closest centroid; ties go to the lowest index.
fn nearest(point: &[f32], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

struct Points<'a> {
    table: &'a VectorTable,
    /// Table rows in id order.
    order: Vec<usize>,
}

impl<'a> Points<'a> {
    fn new(table: &'a VectorTable) -> Self {
        let mut order: Vec<usize> = (0..table.len()).collect();
        order.sort_by(|&a, &b| table.ids()[a].cmp(&table.ids()[b]));
        Points { table, order }
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    fn get(&self, i: usize) -> &'a [f32] {
        self.table.row(self.order[i])
    }

    fn assign(&self, centroids: &[Vec<f64>]) -> Vec<usize> {
        (0..self.len())
            .into_par_iter()
            .map(|i| nearest(self.get(i), centroids).0)
            .collect()
    }

    fn inertia(&self, labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
        let d: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| sq_dist(self.get(i), &centroids[labels[i]]))
            .collect();
        d.iter().sum()
    }

    fn means(&self, labels: &[usize], k: usize, width: usize) -> Vec<Vec<f64>> {
        let mut sums = vec![vec![0.0f64; width]; k];
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            counts[l] += 1;
            for (s, &x) in sums[l].iter_mut().zip(self.get(i)) {
                *s += x as f64;
            }
        }
        for (s, &n) in sums.iter_mut().zip(&counts) {
            debug_assert!(n > 0, "empty clusters are repaired before the update");
            for v in s.iter_mut() {
                *v /= n as f64;
            }
        }
        sums
    }
}

fn to_f64(v: &[f32]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn plus_plus(points: &Points<'_>, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let first = rng.random_range(0..n);
    let mut centroids = vec![to_f64(points.get(first))];
    let mut d2: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| sq_dist(points.get(i), &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave `target` just above the final sum.
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).expect("total > 0"))
        } else {
            rng.random_range(0..n)
        };
        let c = to_f64(points.get(next));
        d2.par_iter_mut().enumerate().for_each(|(i, d)| {
            let nd = sq_dist(points.get(i), &c);
            if nd < *d {
                *d = nd;
            }
        });
        centroids.push(c);
    }
    centroids
}

/// Gives every empty cluster the point farthest from its current centroid,
/// taken from clusters with more than one member.
fn repair_empty(points: &Points<'_>, labels: &mut [usize], centroids: &[Vec<f64>]) -> usize {
    let k = centroids.len();
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    let mut repaired = 0;
    for c in 0..k {
        if counts[c] > 0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, &l) in labels.iter().enumerate() {
            if counts[l] < 2 {
                continue;
            }
            let d = sq_dist(points.get(i), &centroids[l]);
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.expect("n >= k guarantees a donor cluster");
        counts[labels[i]] -= 1;
        labels[i] = c;
        counts[c] = 1;
        repaired += 1;
    }
    repaired
}

pub fn kmeans(vectors: &VectorTable, params: &KMeansParams) -> Result<Clustering> {
    let KMeansParams {
        k,
        seed,
        max_iter,
        tol,
    } = *params;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if vectors.len() < k {
        return Err(Error::InvalidArgument(format!(
            "k-means needs at least k={k} points, got {}",
            vectors.len()
        )));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument("tol must be non-negative".into()));
    }
    let points = Points::new(vectors);
    let width = vectors.width();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus(&points, k, &mut rng);
    let mut labels = points.assign(&centroids);
    let mut history = Vec::new();
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        repair_empty(&points, &mut labels, &centroids);
        let updated = points.means(&labels, k, width);
        history.push(points.inertia(&labels, &updated));
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        centroids = updated;
        if shift < tol {
            break;
        }
        let next = points.assign(&centroids);
        if next == labels {
            break;
        }
        labels = next;
    }

    // Final assignment step so every point sits with its nearest centroid.
    labels = points.assign(&centroids);
    if repair_empty(&points, &mut labels, &centroids) > 0 {
        centroids = points.means(&labels, k, width);
    }
    let inertia = points.inertia(&labels, &centroids);
    history.push(inertia);

    let ids = points
        .order
        .iter()
        .map(|&r| vectors.ids()[r].clone())
        .collect();
    Ok(Clustering {
        k,
        ids,
        labels,
        centroids,
        inertia,
        inertia_history: history,
        seed,
        iterations,
    })
}
