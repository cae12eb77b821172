//! Prompting a language model for rated edge lists and turning the answers
//! into coherence graphs.

mod http;
mod parse;
mod pipeline;
mod prompt;
mod provider;

use std::path::Path;

pub use http::{HttpProvider, API_KEY_VAR, BASE_URL_VAR, DEFAULT_BASE_URL};
pub use parse::{compile_graph, parse_edge_list, render_edge_list, RatedEdge, RatedEdgeList};
pub use pipeline::{
    extract_propositions, parse_proposition_list, sample_ensemble, PromptJob, SampleRecord,
    SampledEnsemble, DEFAULT_SAMPLES,
};
pub use prompt::{build_extraction_prompt, build_prompt};
pub use provider::{
    request_digest, CompletionProvider, CompletionRequest, FixtureMode, FixtureRecord, FixtureStore,
    FnProvider, ProviderResponse, RecordingProvider, ReplayProvider,
};

pub(crate) use provider::write_atomic;

use crate::error::{Error, Result};

/// The provider for a fixture mode. Replay needs only `fixtures`; the other
/// modes need the API key in the environment.
pub fn build_provider(
    mode: FixtureMode,
    fixtures: Option<&Path>,
    base_url: Option<&str>,
) -> Result<Box<dyn CompletionProvider>> {
    let need_dir = || {
        fixtures.ok_or_else(|| {
            Error::InvalidParameter(format!("fixture mode {mode} needs a fixture directory"))
        })
    };
    Ok(match mode {
        FixtureMode::Replay => Box::new(ReplayProvider::new(need_dir()?)),
        FixtureMode::Record => {
            let dir = need_dir()?;
            Box::new(RecordingProvider::new(HttpProvider::from_env(base_url)?, dir))
        }
        FixtureMode::Off => Box::new(HttpProvider::from_env(base_url)?),
    })
}
