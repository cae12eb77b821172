//! Samples coherence graphs from a live OpenAI-compatible endpoint and
//! records every response, so the run can be replayed later.
//!
//! Needs `OPENAI_API_KEY`; `OPENAI_BASE_URL` overrides the endpoint.
//!
//!     cargo run --example live_compile -- fixtures/propositions/oval.json o3-mini 5 /tmp/oval-fixtures

use cdi::cli::read_propositions;
use cdi::ensemble::median_graph;
use cdi::llm::{build_provider, sample_ensemble, FixtureMode, PromptJob};
use std::path::Path;

fn main() {
    env_logger::init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() != 4 {
        eprintln!("usage: live_compile <propositions.json> <model> <samples> <fixture-dir>");
        std::process::exit(1);
    }
    if let Err(e) = run(&args) {
        eprintln!("error: {e}");
        std::process::exit(cdi::cli::exit_code(&e));
    }
}

fn run(args: &[String]) -> cdi::Result<()> {
    let props = read_propositions(Path::new(&args[0]))?;
    let mut job = PromptJob::new(props, args[1].clone());
    job.samples = args[2]
        .parse()
        .map_err(|_| cdi::Error::InvalidParameter(format!("bad sample count {:?}", args[2])))?;
    job.fixture_mode = FixtureMode::Record;
    let provider = build_provider(FixtureMode::Record, Some(Path::new(&args[3])), None)?;
    let sampled = sample_ensemble(&job, provider.as_ref())?;
    for d in &sampled.diagnostics {
        eprintln!("warning: {d}");
    }
    print!("{}", median_graph(&sampled.ensemble).to_json_string());
    Ok(())
}
