use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::space::CutSpace;
use super::{priority_indices, priority_strings, SolverConfig};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, CoherenceGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutProbability {
    pub cut: Bipartition,
    pub coherence: f64,
    pub probability: f64,
}

/// Soft acceptance from the distribution `P(cut) ∝ exp(beta * coherence)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsResult {
    pub beta: f64,
    /// Cuts in decreasing probability. Each cut is oriented so the anchor
    /// lies in its accepted part.
    pub cut_probabilities: Vec<CutProbability>,
    /// Probability that each proposition lies on the anchor's side.
    pub acceptance_marginals: BTreeMap<String, f64>,
    /// Priority ids when given, otherwise the lexicographically smallest id.
    pub anchor: Vec<String>,
}

impl GibbsResult {
    pub fn probability_of(&self, cut: &Bipartition) -> Option<f64> {
        self.cut_probabilities
            .iter()
            .find(|c| &c.cut == cut)
            .map(|c| c.probability)
    }

    pub fn total_probability(&self) -> f64 {
        self.cut_probabilities.iter().map(|c| c.probability).sum()
    }
}

/// Gibbs distribution over the cut space.
///
/// With a priority set the space is the cuts that keep every priority id
/// on one side (the same space [`super::solve_exact`] searches), oriented
/// with the priority ids accepted. `config.gibbs_top_k` truncates the
/// distribution to the most coherent cuts.
pub fn gibbs(
    graph: &CoherenceGraph,
    beta: f64,
    config: &SolverConfig,
    priority: Option<&[&str]>,
) -> Result<GibbsResult> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParameter(format!("beta {beta} must be finite and >= 0")));
    }
    config.validate()?;
    let pinned = priority_indices(graph, priority)?;
    let space = CutSpace::new(graph, config.exact_vertex_limit, &pinned)?;

    let mut states: Vec<(u64, f64)> = Vec::with_capacity(space.size() as usize);
    space.walk(|mask, value| states.push((mask, value)));
    for s in states.iter_mut() {
        s.1 = space.exact_value(s.0);
    }
    states.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    if let Some(k) = config.gibbs_top_k {
        states.truncate(k);
    }

    let top = states.first().map_or(0.0, |s| s.1);
    let weights: Vec<f64> = states.iter().map(|s| (beta * (s.1 - top)).exp()).collect();
    let z: f64 = weights.iter().sum();

    let n = graph.len();
    let mut marginals = vec![0.0; n];
    let mut cut_probabilities = Vec::with_capacity(states.len());
    for (&(mask, value), w) in states.iter().zip(&weights) {
        let p = w / z;
        for (i, m) in marginals.iter_mut().enumerate() {
            if mask & (1 << i) != 0 {
                *m += p;
            }
        }
        cut_probabilities.push(CutProbability {
            cut: space.bipartition(mask),
            coherence: value,
            probability: p,
        });
    }
    cut_probabilities.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then_with(|| a.cut.accepted().cmp(b.cut.accepted()))
    });

    let anchor = if pinned.is_empty() {
        graph.min_id().map(str::to_string).into_iter().collect()
    } else {
        priority_strings(graph, &pinned)
    };
    let acceptance_marginals = graph
        .ids()
        .zip(marginals)
        .map(|(id, m)| (id.to_string(), m.clamp(0.0, 1.0)))
        .collect();
    Ok(GibbsResult {
        beta,
        cut_probabilities,
        acceptance_marginals,
        anchor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn house() -> CoherenceGraph {
        CoherenceGraph::from_ids(
            &["a", "b", "c"],
            [("a", "b", 1.0), ("a", "c", -1.0), ("b", "c", -1.0)],
        )
        .unwrap()
    }

    #[test]
    fn zero_beta_is_uniform() {
        let r = gibbs(&house(), 0.0, &SolverConfig::default(), None).unwrap();
        assert_eq!(r.cut_probabilities.len(), 4);
        for c in &r.cut_probabilities {
            assert!((c.probability - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn large_beta_concentrates() {
        let g = house();
        let r = gibbs(&g, 100.0, &SolverConfig::default(), None).unwrap();
        let opt = Bipartition::new(&g, ["a", "b"]).unwrap();
        assert!(r.probability_of(&opt).unwrap() > 1.0 - 1e-6);
        assert!((r.total_probability() - 1.0).abs() < 1e-12);
        assert!(r.acceptance_marginals["b"] > 1.0 - 1e-6);
        assert!(r.acceptance_marginals["c"] < 1e-6);
    }

    #[test]
    fn rejects_negative_beta() {
        assert!(matches!(
            gibbs(&house(), -0.5, &SolverConfig::default(), None),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn top_k_truncation() {
        let cfg = SolverConfig {
            gibbs_top_k: Some(2),
            ..Default::default()
        };
        let r = gibbs(&house(), 1.0, &cfg, None).unwrap();
        assert_eq!(r.cut_probabilities.len(), 2);
        assert!((r.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn priority_anchor() {
        let r = gibbs(&house(), 1.0, &SolverConfig::default(), Some(&["c"])).unwrap();
        assert_eq!(r.anchor, vec!["c".to_string()]);
        assert!((r.acceptance_marginals["c"] - 1.0).abs() < 1e-12);
    }
}
