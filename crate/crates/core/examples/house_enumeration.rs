//! Lists every bipartition of the three-proposition house example.
//!
//!     cargo run --example house_enumeration

use cdi::solver::{enumerate_cuts, solve_exact, SolverConfig};
use cdi::CoherenceGraph;

fn main() -> cdi::Result<()> {
    let graph = CoherenceGraph::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/graphs/house.json"))?;
    for p in graph.propositions() {
        println!("{}: {}", p.id, p.text);
    }
    println!();
    let config = SolverConfig::default();
    for (cut, value) in enumerate_cuts(&graph, &config)? {
        println!("{cut:<24} {value:>4}");
    }
    let best = solve_exact(&graph, &config, None)?;
    println!("\nunique optimum: {} ({} tie)", best.cut, best.ties.len());
    Ok(())
}
