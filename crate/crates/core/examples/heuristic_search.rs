//! Local search against exhaustive enumeration on random graphs, plus a
//! 60-vertex graph that only the heuristic can handle.
//!
//!     cargo run --release --example heuristic_search

use std::time::Instant;

use cdi::solver::{solve_exact, solve_heuristic, SolverConfig};
use cdi::synth::random_graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LEVELS: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

fn main() -> cdi::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let config = SolverConfig::default().with_restarts(50);
    let mut hits = 0;
    let trials = 20;
    for t in 0..trials {
        let g = random_graph(&mut rng, 16, 0.4, &LEVELS);
        let exact = solve_exact(&g, &config, None)?;
        let heur = solve_heuristic(&g, &config.clone().with_seed(t))?;
        let same = (exact.value - heur.value).abs() < 1e-9;
        hits += same as usize;
        println!("graph {t:>2}: exact {:>5}  heuristic {:>5}{}", exact.value, heur.value, if same { "" } else { "  (miss)" });
    }
    println!("heuristic matched {hits}/{trials}");

    let big = random_graph(&mut rng, 60, 0.15, &LEVELS);
    let start = Instant::now();
    let report = solve_heuristic(&big, &config)?;
    println!(
        "\n60 vertices, {} edges: coherence {} in {:.2?} ({} distinct optima seen)",
        big.edge_count(),
        report.value,
        start.elapsed(),
        report.ties.len()
    );
    Ok(())
}
