use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::parse::{compile_graph, parse_edge_list, RatedEdgeList};
use super::prompt::{build_extraction_prompt, build_prompt};
use super::provider::{CompletionProvider, CompletionRequest, FixtureMode};
use crate::ensemble::GraphEnsemble;
use crate::error::{Error, Result};
use crate::graph::{validate_id, CoherenceGraph, Proposition};

pub const DEFAULT_SAMPLES: usize = 30;

/// N completions of the same prompt over one proposition list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptJob {
    pub propositions: Vec<Proposition>,
    pub samples: usize,
    pub model: String,
    pub max_retries: usize,
    pub fixture_mode: FixtureMode,
    /// Upper bound on completions in flight.
    pub parallelism: usize,
    #[serde(default)]
    pub options: serde_json::Map<String, serde_json::Value>,
}

impl PromptJob {
    pub fn new(propositions: Vec<Proposition>, model: impl Into<String>) -> Self {
        PromptJob {
            propositions,
            samples: DEFAULT_SAMPLES,
            model: model.into(),
            max_retries: 2,
            fixture_mode: FixtureMode::Off,
            parallelism: 4,
            options: Default::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::InvalidParameter("parallelism must be at least 1".into()));
        }
        if self.model.trim().is_empty() {
            return Err(Error::InvalidParameter("model id is empty".into()));
        }
        Ok(())
    }
}

/// Everything kept about one sample, successful or not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub attempts: usize,
    /// The last response received, if any.
    pub raw_text: Option<String>,
    pub edge_list: Option<RatedEdgeList>,
    /// Set when the sample was dropped.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SampledEnsemble {
    pub ensemble: GraphEnsemble,
    /// One record per requested sample, in index order.
    pub records: Vec<SampleRecord>,
    pub diagnostics: Vec<String>,
}

impl SampledEnsemble {
    /// Indices of the samples that made it into the ensemble.
    pub fn kept_indices(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| r.error.is_none())
            .map(|r| r.index)
            .collect()
    }
}

struct Outcome {
    record: SampleRecord,
    graph: Option<CoherenceGraph>,
    provider_failure: bool,
}

fn run_sample(
    job: &PromptJob,
    prompt: &str,
    provider: &dyn CompletionProvider,
    index: usize,
) -> Outcome {
    let mut record = SampleRecord {
        index,
        attempts: 0,
        raw_text: None,
        edge_list: None,
        error: None,
    };
    let mut last_provider_failure = false;
    for attempt in 0..=job.max_retries {
        record.attempts = attempt + 1;
        let request = CompletionRequest {
            prompt: prompt.to_string(),
            model: job.model.clone(),
            sample_index: index,
            attempt,
            options: job.options.clone(),
        };
        let parsed = provider.complete(&request).and_then(|resp| {
            record.raw_text = Some(resp.raw_text.clone());
            let list = parse_edge_list(&resp.raw_text, &job.propositions)?;
            let graph = compile_graph(&list, &job.propositions)?;
            Ok((list, graph))
        });
        match parsed {
            Ok((list, graph)) => {
                record.edge_list = Some(list);
                record.error = None;
                return Outcome {
                    record,
                    graph: Some(graph),
                    provider_failure: false,
                };
            }
            Err(e) => {
                log::warn!("sample {index} attempt {attempt}: {e}");
                last_provider_failure = matches!(e, Error::Provider(_));
                record.error = Some(e.to_string());
                // Replaying the same fixture cannot give a different answer.
                if matches!(e, Error::Fixture { .. }) {
                    break;
                }
            }
        }
    }
    Outcome {
        record,
        graph: None,
        provider_failure: last_provider_failure,
    }
}

/// Issues `job.samples` completions of the coherence prompt, parses and
/// compiles each, and collects the survivors into an ensemble.
///
/// A sample that still fails after `max_retries` retries is dropped and
/// noted in `diagnostics`. Only when every sample fails is this an error.
pub fn sample_ensemble(job: &PromptJob, provider: &dyn CompletionProvider) -> Result<SampledEnsemble> {
    job.validate()?;
    let prompt = build_prompt(&job.propositions)?;
    let next = AtomicUsize::new(0);
    let workers = job.parallelism.min(job.samples);

    let mut outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut mine = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= job.samples {
                            break;
                        }
                        mine.push(run_sample(job, &prompt, provider, i));
                    }
                    mine
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sampling worker panicked"))
            .collect()
    });
    outcomes.sort_by_key(|o| o.record.index);

    let mut graphs = Vec::new();
    let mut diagnostics = Vec::new();
    let mut provider_only = true;
    for o in &mut outcomes {
        match o.graph.take() {
            Some(g) => graphs.push(g),
            None => {
                provider_only &= o.provider_failure;
                diagnostics.push(format!(
                    "sample {} dropped after {} attempt(s): {}",
                    o.record.index,
                    o.record.attempts,
                    o.record.error.as_deref().unwrap_or("unknown error")
                ));
            }
        }
    }
    if graphs.is_empty() {
        return Err(Error::PipelineFailure {
            diagnostics,
            provider_only,
        });
    }
    let ensemble = GraphEnsemble::with_propositions(job.propositions.clone(), graphs)?;
    Ok(SampledEnsemble {
        ensemble,
        records: outcomes.into_iter().map(|o| o.record).collect(),
        diagnostics,
    })
}

/// Asks the model for the key propositions of a transcript.
pub fn extract_propositions(
    transcript: &str,
    provider: &dyn CompletionProvider,
    model: &str,
    target_count_hint: Option<usize>,
) -> Result<Vec<Proposition>> {
    if transcript.trim().is_empty() {
        return Err(Error::InvalidParameter("transcript is empty".into()));
    }
    let request = CompletionRequest::new(build_extraction_prompt(transcript, target_count_hint), model);
    let response = provider.complete(&request)?;
    parse_proposition_list(&response.raw_text)
}

/// Reads `- p1: text` style lines. Numbered and unlabeled bullets are
/// accepted too; if any label is missing, invalid, or repeated, every item
/// is relabeled `p1..pk` in order.
pub fn parse_proposition_list(raw: &str) -> Result<Vec<Proposition>> {
    let items: Vec<(Option<String>, String)> = raw.lines().filter_map(list_item).collect();
    if items.is_empty() {
        return Err(Error::Extraction {
            message: "no proposition lines found".into(),
            raw: raw.to_string(),
        });
    }
    let mut seen = HashSet::new();
    let keep_labels = items.iter().all(|(label, _)| match label {
        Some(l) => validate_id(l).is_ok() && seen.insert(l.clone()),
        None => false,
    });
    Ok(items
        .into_iter()
        .enumerate()
        .map(|(i, (label, text))| {
            let id = match label {
                Some(l) if keep_labels => l,
                _ => format!("p{}", i + 1),
            };
            Proposition::new(id, text)
        })
        .collect())
}

fn list_item(line: &str) -> Option<(Option<String>, String)> {
    let line = line.trim();
    let (bulleted, rest) = match line.strip_prefix(['-', '*', '•']) {
        Some(r) if r.starts_with(' ') => (true, r.trim_start()),
        _ => (false, line),
    };
    if let Some((head, tail)) = rest.split_once(':') {
        let label = head.trim().trim_matches('*').trim();
        let text = tail.trim().trim_start_matches("**").trim();
        if !label.is_empty() && !label.contains(char::is_whitespace) && label.len() <= 16 && !text.is_empty() {
            return Some((Some(label.to_string()), text.to_string()));
        }
    }
    let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 {
        if let Some(text) = rest[digits..].strip_prefix(['.', ')']) {
            let text = text.trim();
            if !text.is_empty() {
                return Some((None, text.to_string()));
            }
        }
    }
    if bulleted && !rest.is_empty() {
        return Some((None, rest.to_string()));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::provider::FnProvider;

    fn props() -> Vec<Proposition> {
        ["a", "b", "c"].iter().map(|id| Proposition::new(*id, *id)).collect()
    }

    fn job(samples: usize) -> PromptJob {
        let mut j = PromptJob::new(props(), "test-model");
        j.samples = samples;
        j.max_retries = 0;
        j
    }

    #[test]
    fn all_samples_kept_in_order() {
        let provider = FnProvider(|r: &CompletionRequest| {
            Ok(format!("[('a', 'b', {})]", r.sample_index % 11))
        });
        let out = sample_ensemble(&job(7), &provider).unwrap();
        assert_eq!(out.ensemble.len(), 7);
        for (i, g) in out.ensemble.samples().iter().enumerate() {
            let expected = ((i % 11) as f64 - 5.0) / 5.0;
            assert!((g.weight("a", "b") - expected).abs() < 1e-12);
        }
        assert_eq!(out.kept_indices(), (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn failed_sample_is_dropped() {
        let provider = FnProvider(|r: &CompletionRequest| {
            Ok(if r.sample_index == 3 { "garbage".into() } else { "[('a', 'c', 10)]".into() })
        });
        let out = sample_ensemble(&job(5), &provider).unwrap();
        assert_eq!(out.ensemble.len(), 4);
        assert_eq!(out.diagnostics.len(), 1);
        assert!(out.diagnostics[0].contains("sample 3"));
        assert_eq!(out.records[3].raw_text.as_deref(), Some("garbage"));
    }

    #[test]
    fn retries_until_success() {
        let provider = FnProvider(|r: &CompletionRequest| {
            Ok(if r.attempt < 2 { "nope".into() } else { "[]".into() })
        });
        let mut j = job(3);
        j.max_retries = 2;
        let out = sample_ensemble(&j, &provider).unwrap();
        assert_eq!(out.ensemble.len(), 3);
        assert!(out.records.iter().all(|r| r.attempts == 3));
        j.max_retries = 1;
        assert!(matches!(
            sample_ensemble(&j, &provider),
            Err(Error::PipelineFailure { provider_only: false, .. })
        ));
    }

    #[test]
    fn provider_failures_are_flagged() {
        let provider = FnProvider(|_: &CompletionRequest| Err(Error::Provider("down".into())));
        match sample_ensemble(&job(2), &provider) {
            Err(Error::PipelineFailure { diagnostics, provider_only }) => {
                assert!(provider_only);
                assert_eq!(diagnostics.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let provider = FnProvider(|_: &CompletionRequest| Ok("[]".to_string()));
        assert!(matches!(sample_ensemble(&job(0), &provider), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn proposition_list_labels() {
        let raw = "Here you go:\n- p1: Athens is strong.\n- p2: Melos is weak.\n\nThanks";
        let p = parse_proposition_list(raw).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].id, "p2");
        assert_eq!(p[1].text, "Melos is weak.");

        let dup = parse_proposition_list("- x: one\n- x: two\n- y: three").unwrap();
        let ids: Vec<&str> = dup.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["p1", "p2", "p3"]);
        assert_eq!(dup[1].text, "two");

        let numbered = parse_proposition_list("1. first\n2) second").unwrap();
        assert_eq!(numbered[1].id, "p2");
        assert_eq!(numbered[1].text, "second");

        let bold = parse_proposition_list("- **a1**: text one\n- **a2**: text two").unwrap();
        assert_eq!(bold[0].id, "a1");
    }

    #[test]
    fn extraction_errors() {
        let provider = FnProvider(|_: &CompletionRequest| Ok("I cannot help with that.".to_string()));
        assert!(matches!(
            extract_propositions("   ", &provider, "m", None),
            Err(Error::InvalidParameter(_))
        ));
        match extract_propositions("Some text.", &provider, "m", None) {
            Err(Error::Extraction { raw, .. }) => assert_eq!(raw, "I cannot help with that."),
            other => panic!("{other:?}"),
        }
    }
}
