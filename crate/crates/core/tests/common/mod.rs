//! Brute-force oracles shared by the integration tests. They only use the
//! public read accessors of the graph types and recompute everything
//! else from scratch.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use cdi::llm::{RatedEdge, RatedEdgeList};
use cdi::synth::vertex_ids;
use cdi::{CoherenceGraph, Proposition};
use rand::seq::SliceRandom;
use rand::Rng;

pub const EPS: f64 = 1e-9;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

/// Coherence of the split given by `accepted`, summed pair by pair.
pub fn oracle_coherence(g: &CoherenceGraph, accepted: &BTreeSet<String>) -> f64 {
    let ids: Vec<&str> = g.ids().collect();
    let mut total = 0.0;
    for (i, u) in ids.iter().enumerate() {
        for v in &ids[i + 1..] {
            if accepted.contains(*u) != accepted.contains(*v) {
                total -= g.weight(u, v);
            }
        }
    }
    total
}

/// Pair weights looked up once, indexed by vertex position.
fn weight_matrix(g: &CoherenceGraph) -> (Vec<String>, Vec<Vec<f64>>) {
    let ids: Vec<String> = g.ids().map(String::from).collect();
    let m = ids
        .iter()
        .map(|u| ids.iter().map(|v| if u == v { 0.0 } else { g.weight(u, v) }).collect())
        .collect();
    (ids, m)
}

#[allow(clippy::needless_range_loop)]
fn mask_coherence(w: &[Vec<f64>], mask: u32) -> f64 {
    let n = w.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if (mask >> i & 1) != (mask >> j & 1) {
                total -= w[i][j];
            }
        }
    }
    total
}

fn mask_set(ids: &[String], mask: u32) -> BTreeSet<String> {
    ids.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, id)| id.clone())
        .collect()
}

/// Best value and the optimal cuts, each named by the side that holds the
/// smallest id (or all of `priority`, when given).
pub fn oracle_optimum(g: &CoherenceGraph, priority: &[&str]) -> (f64, BTreeSet<BTreeSet<String>>) {
    let (ids, w) = weight_matrix(g);
    let anchor: u32 = if priority.is_empty() {
        let min = ids.iter().enumerate().min_by_key(|(_, id)| id.as_str()).unwrap().0;
        1 << min
    } else {
        priority
            .iter()
            .map(|p| 1u32 << ids.iter().position(|id| id == p).unwrap())
            .fold(0, |a, b| a | b)
    };
    let scored: Vec<(u32, f64)> = (0u32..1 << ids.len())
        .filter(|m| m & anchor == anchor)
        .map(|m| (m, mask_coherence(&w, m)))
        .collect();
    let best = scored.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let ties = scored
        .iter()
        .filter(|(_, c)| (c - best).abs() <= EPS)
        .map(|(m, _)| mask_set(&ids, *m))
        .collect();
    (best, ties)
}

/// Gibbs acceptance marginals over unordered cuts: the probability that
/// each vertex sits with the smallest id.
pub fn oracle_marginals(g: &CoherenceGraph, beta: f64) -> Vec<(String, f64)> {
    let (ids, w) = weight_matrix(g);
    let min = ids.iter().enumerate().min_by_key(|(_, id)| id.as_str()).unwrap().0;
    let masks: Vec<u32> = (0u32..1 << ids.len()).filter(|m| m >> min & 1 == 1).collect();
    let scores: Vec<f64> = masks.iter().map(|&m| beta * mask_coherence(&w, m)).collect();
    let top = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
    let z: f64 = weights.iter().sum();
    ids.iter()
        .enumerate()
        .map(|(i, id)| {
            let p: f64 = masks
                .iter()
                .zip(&weights)
                .filter(|(m, _)| *m >> i & 1 == 1)
                .map(|(_, w)| w)
                .sum();
            (id.clone(), p / z)
        })
        .collect()
}

/// Sum of |w1 - w2| over every vertex pair.
pub fn oracle_l1(a: &CoherenceGraph, b: &CoherenceGraph) -> f64 {
    let ids: Vec<&str> = a.ids().collect();
    let mut total = 0.0;
    for (i, u) in ids.iter().enumerate() {
        for v in &ids[i + 1..] {
            total += (a.weight(u, v) - b.weight(u, v)).abs();
        }
    }
    total
}

/// Sorts each pair's sample weights and takes the middle (mean of the two
/// middle values for even counts).
pub fn oracle_median_weight(samples: &[CoherenceGraph], u: &str, v: &str) -> f64 {
    let mut w: Vec<f64> = samples.iter().map(|s| s.weight(u, v)).collect();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = w.len();
    if n % 2 == 1 {
        w[n / 2]
    } else {
        (w[n / 2 - 1] + w[n / 2]) / 2.0
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// A graph with each pair present with probability `density`, weight drawn
/// from `levels`.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64, levels: &[f64]) -> CoherenceGraph {
    let ids = vertex_ids(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((ids[i].clone(), ids[j].clone(), *levels.choose(rng).unwrap()));
            }
        }
    }
    let props = ids.iter().map(|id| Proposition::new(id.clone(), "")).collect();
    CoherenceGraph::new(props, edges).unwrap()
}

/// A valid rated edge list over `p1..pk`: distinct pairs in lexicographic
/// orientation, in random order.
pub fn random_edge_list(rng: &mut impl Rng) -> (Vec<Proposition>, RatedEdgeList) {
    let k = rng.gen_range(2..=15);
    let props: Vec<Proposition> = (1..=k).map(|i| Proposition::new(format!("p{i}"), "")).collect();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (&props[i].id, &props[j].id);
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            pairs.push((u.clone(), v.clone()));
        }
    }
    pairs.shuffle(rng);
    let keep = rng.gen_range(0..=pairs.len());
    let triples = pairs
        .into_iter()
        .take(keep)
        .map(|(u, v)| RatedEdge {
            u,
            v,
            rating: rng.gen_range(0..=10),
        })
        .collect();
    (
        props,
        RatedEdgeList {
            triples,
            warnings: Vec::new(),
        },
    )
}

/// Coherence gained by moving one vertex to the other side.
pub fn oracle_flip_gain(g: &CoherenceGraph, accepted: &BTreeSet<String>, id: &str) -> f64 {
    let mut flipped = accepted.clone();
    if !flipped.remove(id) {
        flipped.insert(id.to_string());
    }
    oracle_coherence(g, &flipped) - oracle_coherence(g, accepted)
}
