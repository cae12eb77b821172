//! Gray-code walk over the cut space with incremental coherence updates.

use crate::error::{Error, Result};
use crate::graph::{coherence_of_sides, Bipartition, CoherenceGraph};

/// Largest vertex count a `u64` membership mask can hold.
const MASK_BITS: usize = 63;

/// The set of unordered bipartitions of a graph, with some vertices pinned
/// to the accepted side.
///
/// Without a priority set the lexicographically smallest vertex is pinned,
/// which visits each unordered bipartition exactly once. With a priority set
/// every priority vertex is pinned, which also fixes orientation and
/// excludes cuts that separate priority vertices.
pub(crate) struct CutSpace<'g> {
    graph: &'g CoherenceGraph,
    neighbors: Vec<Vec<(usize, f64)>>,
    pinned: u64,
    free: Vec<usize>,
}

impl<'g> CutSpace<'g> {
    pub fn new(graph: &'g CoherenceGraph, limit: usize, priority: &[usize]) -> Result<Self> {
        let n = graph.len();
        let limit = limit.min(MASK_BITS);
        if n > limit {
            return Err(Error::TooLarge { vertices: n, limit });
        }
        let mut neighbors = vec![Vec::new(); n];
        for (i, j, w) in graph.indexed_edges() {
            if w != 0.0 {
                neighbors[i].push((j, w));
                neighbors[j].push((i, w));
            }
        }
        let pinned_list: Vec<usize> = if priority.is_empty() {
            graph.min_id_index().into_iter().collect()
        } else {
            priority.to_vec()
        };
        let pinned = pinned_list.iter().fold(0u64, |m, &i| m | (1 << i));
        let free = (0..n).filter(|i| pinned & (1 << i) == 0).collect();
        Ok(CutSpace {
            graph,
            neighbors,
            pinned,
            free,
        })
    }

    /// Number of cuts the walk visits.
    pub fn size(&self) -> u64 {
        1u64 << self.free.len()
    }

    /// Calls `visit(mask, value)` once per cut; bit `i` of `mask` set means
    /// vertex `i` is accepted.
    pub fn walk(&self, mut visit: impl FnMut(u64, f64)) {
        let n = self.graph.len();
        let mut mask = self.pinned;
        let sides: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let mut value = coherence_of_sides(self.graph, &sides);
        // gain[v]: change in coherence if v switches sides.
        let mut gain: Vec<f64> = (0..n)
            .map(|v| {
                self.neighbors[v]
                    .iter()
                    .map(|&(u, w)| if sides[u] != sides[v] { w } else { -w })
                    .sum()
            })
            .collect();
        visit(mask, value);
        for step in 1..self.size() {
            let v = self.free[step.trailing_zeros() as usize];
            value += gain[v];
            let v_side = mask & (1 << v) != 0;
            for &(u, w) in &self.neighbors[v] {
                let u_side = mask & (1 << u) != 0;
                let old_term = if u_side != v_side { w } else { -w };
                gain[u] -= 2.0 * old_term;
            }
            gain[v] = -gain[v];
            mask ^= 1 << v;
            visit(mask, value);
        }
    }

    pub fn bipartition(&self, mask: u64) -> Bipartition {
        Bipartition::from_mask(self.graph, |i| mask & (1 << i) != 0)
    }

    /// Coherence recomputed from scratch for `mask`.
    pub fn exact_value(&self, mask: u64) -> f64 {
        let sides: Vec<bool> = (0..self.graph.len()).map(|i| mask & (1 << i) != 0).collect();
        coherence_of_sides(self.graph, &sides)
    }
}
