//! Seeded synthetic graphs and ensembles for examples, benchmarks, and
//! tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::GraphEnsemble;
use crate::error::Result;
use crate::graph::{rating_to_weight, CoherenceGraph, Proposition};

/// Vertex ids `v00, v01, ...`, which sort in index order.
pub fn vertex_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i:02}")).collect()
}

/// A graph on `n` vertices where each pair gets an edge with probability
/// `density`, its weight chosen uniformly from `levels`.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64, levels: &[f64]) -> CoherenceGraph {
    let ids = vertex_ids(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let w = *levels.choose(rng).expect("at least one weight level");
                edges.push((ids[i].clone(), ids[j].clone(), w));
            }
        }
    }
    let props = ids.iter().map(|id| Proposition::new(id.clone(), id.clone())).collect();
    CoherenceGraph::new(props, edges).expect("synthetic graphs are valid")
}

/// How sampled graphs deviate from the planted one, in rating units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// Probability that a rating moves by -1 or +1 (each half of this).
    pub jitter: f64,
    /// Probability that a planted edge is omitted.
    pub drop: f64,
    /// Probability that an unrelated pair gets a random rating.
    pub spurious: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            jitter: 0.4,
            drop: 0.1,
            spurious: 0.05,
        }
    }
}

/// `samples` noisy copies of `planted`, each weight living on the rating
/// grid `(r - 5) / 5`.
pub fn planted_ensemble(
    planted: &CoherenceGraph,
    samples: usize,
    noise: NoiseModel,
    seed: u64,
) -> Result<GraphEnsemble> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = planted.len();
    let props = planted.propositions().to_vec();
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = planted.weight_at(i, j);
                let rating = if w != 0.0 {
                    if rng.gen_bool(noise.drop) {
                        continue;
                    }
                    let base = (w * 5.0 + 5.0).round() as i64;
                    let step = if rng.gen_bool(noise.jitter) {
                        if rng.gen_bool(0.5) { 1 } else { -1 }
                    } else {
                        0
                    };
                    (base + step).clamp(0, 10)
                } else if rng.gen_bool(noise.spurious) {
                    rng.gen_range(0..=10)
                } else {
                    continue;
                };
                let weight = rating_to_weight(rating)?;
                if weight != 0.0 {
                    edges.push((props[i].id.clone(), props[j].id.clone(), weight));
                }
            }
        }
        out.push(CoherenceGraph::new(props.clone(), edges)?);
    }
    GraphEnsemble::with_propositions(props, out)
}

/// `samples` copies of the same graph.
pub fn identical_ensemble(graph: &CoherenceGraph, samples: usize) -> Result<GraphEnsemble> {
    GraphEnsemble::new(vec![graph.clone(); samples])
}
