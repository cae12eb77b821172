//! Maximizing coherence: exact enumeration, local search, and Gibbs
//! weighting over the cut space.
//!
//! All randomness flows from [`SolverConfig::rng_seed`], so every solver is
//! a pure function of `(graph, config)`.

mod exact;
mod gibbs;
mod heuristic;
mod space;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, CoherenceGraph};

pub use exact::{enumerate_cuts, solve_exact};
pub use gibbs::{gibbs, CutProbability, GibbsResult};
pub use heuristic::{solve_heuristic, solve_heuristic_with_priority};

/// Values within this distance count as equal when collecting ties.
pub const TIE_EPSILON: f64 = 1e-9;

/// Simulated-annealing perturbation applied after each descent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub initial_temperature: f64,
    /// Multiplicative cooling per step, in `(0, 1]`.
    pub cooling: f64,
    pub steps: usize,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            initial_temperature: 1.0,
            cooling: 0.98,
            steps: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Largest graph the exhaustive solvers accept.
    pub exact_vertex_limit: usize,
    pub restarts: usize,
    pub rng_seed: u64,
    /// Default inverse temperature for Gibbs weighting.
    pub beta: f64,
    /// `None` disables the annealing phase of the heuristic.
    pub anneal: Option<AnnealSchedule>,
    /// Restrict the Gibbs distribution to the `k` most coherent cuts.
    pub gibbs_top_k: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            exact_vertex_limit: 24,
            restarts: 50,
            rng_seed: 0,
            beta: 1.0,
            anneal: Some(AnnealSchedule::default()),
            gibbs_top_k: None,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.exact_vertex_limit < 1 {
            return Err(Error::InvalidParameter("exact_vertex_limit must be at least 1".into()));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta {} must be >= 0", self.beta)));
        }
        if let Some(s) = &self.anneal {
            if !(s.initial_temperature > 0.0 && s.cooling > 0.0 && s.cooling <= 1.0) {
                return Err(Error::InvalidParameter(
                    "anneal schedule needs temperature > 0 and cooling in (0, 1]".into(),
                ));
            }
        }
        if self.gibbs_top_k == Some(0) {
            return Err(Error::InvalidParameter("gibbs_top_k must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    /// The reported optimum, oriented toward the priority set when given,
    /// canonically otherwise.
    pub cut: Bipartition,
    pub value: f64,
    /// True iff produced by exhaustive enumeration.
    pub exact: bool,
    /// Every cut attaining `value` that the solver saw. Complete in exact
    /// mode.
    pub ties: Vec<Bipartition>,
    #[serde(default)]
    pub priority: Vec<String>,
}

impl CutReport {
    pub fn summary(&self) -> String {
        let join = |s: &std::collections::BTreeSet<String>| {
            s.iter().cloned().collect::<Vec<_>>().join(", ")
        };
        let mut s = format!(
            "{} optimum: coherence {}\n  accepted: {{{}}}\n  rejected: {{{}}}\n",
            if self.exact { "exact" } else { "heuristic" },
            crate::graph::dot::format_weight_plain(self.value),
            join(self.cut.accepted()),
            join(self.cut.rejected()),
        );
        if !self.priority.is_empty() {
            s.push_str(&format!("  priority: {}\n", self.priority.join(", ")));
        }
        if self.ties.len() > 1 {
            s.push_str(&format!("  {} cuts attain this value:\n", self.ties.len()));
            for t in self.ties.iter().take(20) {
                s.push_str(&format!("    {t}\n"));
            }
            if self.ties.len() > 20 {
                s.push_str("    ...\n");
            }
        }
        s
    }
}

/// Resolves priority ids to vertex indices, rejecting unknown ids.
pub(crate) fn priority_indices(graph: &CoherenceGraph, priority: Option<&[&str]>) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for id in priority.unwrap_or(&[]) {
        let i = graph
            .index_of(id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
        if !out.contains(&i) {
            out.push(i);
        }
    }
    Ok(out)
}

pub(crate) fn priority_strings(graph: &CoherenceGraph, indices: &[usize]) -> Vec<String> {
    indices
        .iter()
        .map(|&i| graph.propositions()[i].id.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        SolverConfig::default().validate().unwrap();
        let bad = SolverConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            exact_vertex_limit: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            beta: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
