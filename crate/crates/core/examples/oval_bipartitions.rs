//! Scores a handful of bipartitions of the quantized Oval graph, then
//! solves it with and without the privileged proposition `o`.
//!
//!     cargo run --example oval_bipartitions

use cdi::solver::{solve_exact, SolverConfig};
use cdi::{coherence, Bipartition, CoherenceGraph};

fn main() -> cdi::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/graphs/oval.json");
    let graph = CoherenceGraph::read_json(path)?;

    let cuts: [&[&str]; 9] = [
        &["o", "p", "r"],
        &["a", "o", "p", "r"],
        &["a", "e", "k", "o", "p", "r"],
        &["a", "k", "o", "p", "r"],
        &["a", "e", "k", "o"],
        &["a", "e", "k", "o", "r"],
        &["o", "p"],
        &["e", "o", "p", "r"],
        &["a", "o"],
    ];
    for accepted in cuts {
        let cut = Bipartition::new(&graph, accepted.iter().copied())?;
        println!("{:<40} {:>5}", cut.to_string(), coherence(&graph, &cut)?);
    }

    let config = SolverConfig::default();
    let free = solve_exact(&graph, &config, None)?;
    println!("\nwithout priority:\n{}", free.summary());
    let pinned = solve_exact(&graph, &config, Some(&["o"]))?;
    println!("with o privileged:\n{}", pinned.summary());
    Ok(())
}
