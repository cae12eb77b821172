//! Soft acceptance of the Oval propositions as the inverse temperature
//! grows.
//!
//!     cargo run --example gibbs_acceptance

use cdi::solver::{gibbs, SolverConfig};
use cdi::CoherenceGraph;

fn main() -> cdi::Result<()> {
    let graph = CoherenceGraph::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/graphs/oval.json"))?;
    let config = SolverConfig::default();
    let ids: Vec<&str> = graph.ids().collect();
    println!("{:>6}  {}", "beta", ids.iter().map(|i| format!("{i:>6}")).collect::<String>());
    for beta in [0.0, 0.5, 1.0, 2.0, 5.0, 20.0] {
        let result = gibbs(&graph, beta, &config, Some(&["o"]))?;
        let row: String = ids
            .iter()
            .map(|id| format!("{:>6.3}", result.acceptance_marginals[*id]))
            .collect();
        println!("{beta:>6}  {row}");
    }
    let sharp = gibbs(&graph, 5.0, &config, Some(&["o"]))?;
    println!("\nmost likely cuts at beta 5:");
    for c in sharp.cut_probabilities.iter().take(4) {
        println!("  {:<36} coherence {:>5}  p = {:.4}", c.cut.to_string(), c.coherence, c.probability);
    }
    Ok(())
}
