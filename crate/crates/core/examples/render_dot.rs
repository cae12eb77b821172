//! Graphviz output for the Oval graph with its best cut shaded. Pipe into
//! `dot -Tsvg` (or `circo`) to draw it.
//!
//!     cargo run --example render_dot | circo -Tsvg > oval.svg

use cdi::solver::{solve_exact, SolverConfig};
use cdi::{to_dot, CoherenceGraph};

fn main() -> cdi::Result<()> {
    let graph = CoherenceGraph::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/graphs/oval.json"))?;
    let report = solve_exact(&graph, &SolverConfig::default(), Some(&["o"]))?;
    print!("{}", to_dot(&graph, Some(&report.cut)));
    Ok(())
}
