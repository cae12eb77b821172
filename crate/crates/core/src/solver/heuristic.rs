use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{priority_indices, priority_strings, AnnealSchedule, CutReport, SolverConfig, TIE_EPSILON};
use crate::error::Result;
use crate::graph::{coherence_of_sides, Bipartition, CoherenceGraph};

/// Multi-start local search for large graphs.
///
/// Each restart draws a random bipartition, applies best-improvement
/// single-vertex flips until none helps, then optionally anneals and
/// descends again. The result is single-flip locally optimal and
/// deterministic for a fixed `config.rng_seed`.
pub fn solve_heuristic(graph: &CoherenceGraph, config: &SolverConfig) -> Result<CutReport> {
    solve_heuristic_with_priority(graph, config, None)
}

/// [`solve_heuristic`] with priority vertices held on the accepted side.
/// Priority vertices never flip, so local optimality holds over the
/// remaining vertices only.
pub fn solve_heuristic_with_priority(
    graph: &CoherenceGraph,
    config: &SolverConfig,
    priority: Option<&[&str]>,
) -> Result<CutReport> {
    config.validate()?;
    let pinned = priority_indices(graph, priority)?;
    let n = graph.len();
    let search = LocalSearch::new(graph, &pinned);
    let anchor = graph.min_id_index();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    let mut best_value = f64::NEG_INFINITY;
    let mut best_cuts: BTreeSet<Vec<bool>> = BTreeSet::new();
    for _ in 0..config.restarts {
        let mut state = search.random_state(&mut rng);
        search.descend(&mut state);
        if let Some(schedule) = &config.anneal {
            search.anneal(&mut state, schedule, &mut rng);
            search.descend(&mut state);
        }
        let mut sides = state.sides;
        if pinned.is_empty() {
            if let Some(a) = anchor {
                if !sides[a] {
                    sides.iter_mut().for_each(|s| *s = !*s);
                }
            }
        }
        let value = coherence_of_sides(graph, &sides);
        if value > best_value + TIE_EPSILON {
            best_value = value;
            best_cuts.clear();
            best_cuts.insert(sides);
        } else if value >= best_value - TIE_EPSILON {
            best_cuts.insert(sides);
        }
    }

    let mut ties: Vec<Bipartition> = best_cuts
        .iter()
        .map(|s| Bipartition::from_mask(graph, |i| s[i]))
        .collect();
    ties.sort_by(|a, b| a.accepted().cmp(b.accepted()));
    let cut = ties
        .first()
        .cloned()
        .unwrap_or_else(|| Bipartition::from_mask(graph, |_| true));
    let value = if n == 0 { 0.0 } else { best_value };
    Ok(CutReport {
        cut,
        value,
        exact: false,
        ties,
        priority: priority_strings(graph, &pinned),
    })
}

struct LocalSearch {
    neighbors: Vec<Vec<(usize, f64)>>,
    pinned: Vec<bool>,
    free: Vec<usize>,
}

struct State {
    sides: Vec<bool>,
    /// Change in coherence if the vertex switches sides.
    gain: Vec<f64>,
    value: f64,
}

impl LocalSearch {
    fn new(graph: &CoherenceGraph, pinned_list: &[usize]) -> Self {
        let n = graph.len();
        let mut neighbors = vec![Vec::new(); n];
        for (i, j, w) in graph.indexed_edges() {
            if w != 0.0 {
                neighbors[i].push((j, w));
                neighbors[j].push((i, w));
            }
        }
        let mut pinned = vec![false; n];
        for &p in pinned_list {
            pinned[p] = true;
        }
        let free = (0..n).filter(|&i| !pinned[i]).collect();
        LocalSearch {
            neighbors,
            pinned,
            free,
        }
    }

    fn random_state(&self, rng: &mut impl Rng) -> State {
        let sides: Vec<bool> = self
            .pinned
            .iter()
            .map(|&p| p || rng.gen_bool(0.5))
            .collect();
        self.state_from(sides)
    }

    fn state_from(&self, sides: Vec<bool>) -> State {
        let gain: Vec<f64> = (0..sides.len())
            .map(|v| {
                self.neighbors[v]
                    .iter()
                    .map(|&(u, w)| if sides[u] != sides[v] { w } else { -w })
                    .sum()
            })
            .collect();
        let crossing: f64 = (0..sides.len())
            .flat_map(|v| self.neighbors[v].iter().map(move |&(u, w)| (v, u, w)))
            .filter(|&(v, u, _)| v < u && sides[u] != sides[v])
            .map(|(_, _, w)| w)
            .sum();
        State {
            sides,
            gain,
            value: 0.0 - crossing,
        }
    }

    fn flip(&self, state: &mut State, v: usize) {
        let v_side = state.sides[v];
        for &(u, w) in &self.neighbors[v] {
            let old_term = if state.sides[u] != v_side { w } else { -w };
            state.gain[u] -= 2.0 * old_term;
        }
        state.value += state.gain[v];
        state.gain[v] = -state.gain[v];
        state.sides[v] = !v_side;
    }

    /// Best-improvement descent to a single-flip local optimum.
    fn descend(&self, state: &mut State) {
        loop {
            let best = self
                .free
                .iter()
                .copied()
                .max_by(|&a, &b| state.gain[a].total_cmp(&state.gain[b]).then(b.cmp(&a)));
            match best {
                Some(v) if state.gain[v] > TIE_EPSILON => self.flip(state, v),
                _ => break,
            }
        }
    }

    /// Metropolis walk over single flips; leaves `state` at the best
    /// configuration visited.
    fn anneal(&self, state: &mut State, schedule: &AnnealSchedule, rng: &mut impl Rng) {
        if self.free.is_empty() || schedule.steps == 0 {
            return;
        }
        let mut best_sides = state.sides.clone();
        let mut best_value = state.value;
        let mut temperature = schedule.initial_temperature;
        for _ in 0..schedule.steps {
            let v = self.free[rng.gen_range(0..self.free.len())];
            let delta = state.gain[v];
            if delta >= 0.0 || rng.gen::<f64>() < (delta / temperature).exp() {
                self.flip(state, v);
                if state.value > best_value + TIE_EPSILON {
                    best_value = state.value;
                    best_sides.clone_from(&state.sides);
                }
            }
            temperature *= schedule.cooling;
        }
        *state = self.state_from(best_sides);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::coherence;

    #[test]
    fn nonnegative_graph_optimum_is_zero() {
        let g = CoherenceGraph::from_ids(
            &["a", "b", "c", "d"],
            [("a", "b", 1.0), ("b", "c", 0.5), ("c", "d", 0.2), ("a", "d", 0.0)],
        )
        .unwrap();
        let r = solve_heuristic(&g, &SolverConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.exact);
    }

    #[test]
    fn deterministic_for_seed() {
        let g = CoherenceGraph::from_ids(
            &["a", "b", "c", "d", "e"],
            [
                ("a", "b", -1.0),
                ("b", "c", -0.5),
                ("c", "d", 1.0),
                ("d", "e", -1.0),
                ("a", "e", 0.5),
            ],
        )
        .unwrap();
        let cfg = SolverConfig::default().with_seed(7);
        let a = solve_heuristic(&g, &cfg).unwrap();
        let b = solve_heuristic(&g, &cfg).unwrap();
        assert_eq!(a, b);
        assert!((coherence(&g, &a.cut).unwrap() - a.value).abs() < 1e-12);
    }

    #[test]
    fn priority_is_respected() {
        let g = CoherenceGraph::from_ids(&["a", "b"], [("a", "b", -1.0)]).unwrap();
        let r = solve_heuristic_with_priority(&g, &SolverConfig::default(), Some(&["b"])).unwrap();
        assert!(r.cut.is_accepted("b"));
        assert!(!r.cut.is_accepted("a"));
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn without_annealing() {
        let g = CoherenceGraph::from_ids(&["a", "b", "c"], [("a", "b", -1.0), ("b", "c", -1.0)])
            .unwrap();
        let cfg = SolverConfig {
            anneal: None,
            ..Default::default()
        };
        assert_eq!(solve_heuristic(&g, &cfg).unwrap().value, 2.0);
    }
}
