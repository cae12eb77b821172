//! The Melian bundle end to end through the library API, offline: replay
//! the extraction and the 30 compilation responses, take the median, and
//! solve it.
//!
//!     cargo run --example replay_pipeline

use cdi::ensemble::median_graph;
use cdi::llm::{extract_propositions, sample_ensemble, FixtureMode, PromptJob, ReplayProvider};
use cdi::solver::{solve_exact, SolverConfig};

fn main() -> cdi::Result<()> {
    let bundle = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/melian");
    let transcript = std::fs::read_to_string(format!("{bundle}/transcript.txt"))
        .expect("transcript is committed");
    let provider = ReplayProvider::new(format!("{bundle}/responses"));

    let props = extract_propositions(&transcript, &provider, "gpt-4o", Some(12))?;
    for p in &props {
        println!("{:>4}: {}", p.id, p.text);
    }

    let mut job = PromptJob::new(props, "o1-mini");
    job.fixture_mode = FixtureMode::Replay;
    let sampled = sample_ensemble(&job, &provider)?;
    let median = median_graph(&sampled.ensemble);
    println!("\n{} samples, median has {} edges", sampled.ensemble.len(), median.edge_count());

    let report = solve_exact(&median, &SolverConfig::default(), None)?;
    print!("{}", report.summary());
    Ok(())
}
