use super::space::CutSpace;
use super::{priority_indices, priority_strings, CutReport, SolverConfig, TIE_EPSILON};
use crate::error::Result;
use crate::graph::{Bipartition, CoherenceGraph};

/// Maximizes coherence by visiting every unordered bipartition.
///
/// With a priority set, only cuts keeping all priority vertices together
/// are searched and every reported cut has them on the accepted side.
pub fn solve_exact(
    graph: &CoherenceGraph,
    config: &SolverConfig,
    priority: Option<&[&str]>,
) -> Result<CutReport> {
    config.validate()?;
    let pinned = priority_indices(graph, priority)?;
    let space = CutSpace::new(graph, config.exact_vertex_limit, &pinned)?;

    let mut best = f64::NEG_INFINITY;
    let mut ties: Vec<u64> = Vec::new();
    space.walk(|mask, value| {
        if value > best + TIE_EPSILON {
            best = value;
            ties.clear();
            ties.push(mask);
        } else if value >= best - TIE_EPSILON {
            ties.push(mask);
        }
    });

    let mut tied: Vec<(Bipartition, u64)> = ties.iter().map(|&m| (space.bipartition(m), m)).collect();
    tied.sort_by(|a, b| a.0.accepted().cmp(b.0.accepted()));
    let value = space.exact_value(tied[0].1);
    let cuts: Vec<Bipartition> = tied.into_iter().map(|(c, _)| c).collect();
    Ok(CutReport {
        cut: cuts[0].clone(),
        value,
        exact: true,
        ties: cuts,
        priority: priority_strings(graph, &pinned),
    })
}

/// Every unordered bipartition with its coherence, most coherent first.
///
/// Cuts are canonically oriented (smallest id accepted); equal values keep a
/// stable order by accepted set.
pub fn enumerate_cuts(
    graph: &CoherenceGraph,
    config: &SolverConfig,
) -> Result<Vec<(Bipartition, f64)>> {
    config.validate()?;
    let space = CutSpace::new(graph, config.exact_vertex_limit, &[])?;
    let mut out = Vec::with_capacity(space.size() as usize);
    space.walk(|mask, value| out.push((space.bipartition(mask), value)));
    out.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| a.0.accepted().cmp(b.0.accepted()))
    });
    Ok(out)
}
