//! Regenerates everything under `fixtures/` except the proposition lists
//! and the transcript: reference graphs, recorded model responses for the
//! Oval and Melian bundles, and the golden CLI outputs.
//!
//! The recorded responses are scripted: each pair's ratings are spread
//! around a target so that the 30-sample median lands on the published
//! graph. They go through the normal recording provider, so the files are
//! exactly what a live run in record mode would leave behind.
//!
//!     cargo run --example build_fixtures

use std::fs;
use std::path::{Path, PathBuf};

use cdi::cli::read_propositions;
use cdi::llm::{
    build_extraction_prompt, sample_ensemble, CompletionProvider, CompletionRequest, FnProvider,
    PromptJob, RecordingProvider,
};
use cdi::{CoherenceGraph, Proposition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SAMPLES: usize = 30;
const COMPILE_MODEL: &str = "o1-mini";
const EXTRACT_MODEL: &str = "gpt-4o";

const OVAL_EDGES: [(&str, &str, f64); 12] = [
    ("a", "e", 1.0),
    ("a", "k", 1.0),
    ("a", "p", 0.5),
    ("a", "r", 0.5),
    ("e", "k", 1.0),
    ("e", "p", -1.0),
    ("e", "r", -1.0),
    ("k", "p", -1.0),
    ("k", "r", 0.5),
    ("o", "p", 1.0),
    ("o", "r", 1.0),
    ("p", "r", 1.0),
];

const MELIAN_EDGES: [(&str, &str, f64); 17] = [
    ("p1", "p3", 1.0),
    ("p1", "p6", 0.6),
    ("p10", "p11", 0.6),
    ("p10", "p5", 0.6),
    ("p10", "p8", 0.5),
    ("p11", "p5", -0.4),
    ("p12", "p6", -0.4),
    ("p12", "p7", -1.0),
    ("p12", "p8", 1.0),
    ("p2", "p3", 0.3),
    ("p2", "p7", 1.0),
    ("p2", "p9", 0.6),
    ("p3", "p4", 1.0),
    ("p3", "p6", 0.5),
    ("p3", "p9", 0.4),
    ("p4", "p7", 0.1),
    ("p4", "p9", 0.4),
];

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn write(path: &Path, body: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, body).unwrap();
}

/// Ratings for one pair across all samples; `None` means the pair is left
/// out of that response.
fn spread(weight: f64, rng: &mut ChaCha8Rng) -> Vec<Option<u8>> {
    let mut out;
    if weight == 0.0 {
        out = vec![None; SAMPLES];
        for _ in 0..rng.gen_range(0..=3) {
            let k = rng.gen_range(0..SAMPLES);
            let r = *[1u8, 2, 3, 7, 8, 9].choose(rng).unwrap();
            out[k] = Some(r);
        }
        return out;
    }
    let twice = ((weight * 5.0 + 5.0) * 2.0).round() as i32;
    let (lo, hi) = (twice.div_euclid(2), (twice + 1).div_euclid(2));
    let half = (SAMPLES - 2) / 2;
    let mut values = vec![lo, hi];
    for _ in 0..half {
        let d = *[0, 0, 1, 1, 2].choose(rng).unwrap();
        values.push((lo - d).max(0));
        let d = *[0, 0, 1, 1, 2].choose(rng).unwrap();
        values.push((hi + d).min(10));
    }
    values.shuffle(rng);
    out = values
        .into_iter()
        .map(|r| if r == 5 { None } else { Some(r as u8) })
        .collect();
    out
}

fn script_responses(graph: &CoherenceGraph, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<&str> = graph.ids().collect();
    let mut pairs = Vec::new();
    for (i, u) in ids.iter().enumerate() {
        for v in &ids[i + 1..] {
            let (u, v) = if u < v { (*u, *v) } else { (*v, *u) };
            pairs.push((u, v, graph.weight(u, v)));
        }
    }
    pairs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let columns: Vec<Vec<Option<u8>>> = pairs.iter().map(|p| spread(p.2, &mut rng)).collect();

    (0..SAMPLES)
        .map(|s| {
            let rated: Vec<(&str, &str, u8)> = pairs
                .iter()
                .zip(&columns)
                .filter_map(|(p, col)| col[s].map(|r| (p.0, p.1, r)))
                .collect();
            let single = |q: char| {
                rated
                    .iter()
                    .map(|(u, v, r)| format!("({q}{u}{q}, {q}{v}{q}, {r})"))
                    .collect::<Vec<_>>()
            };
            match s % 5 {
                0 => format!("[{}]", single('\'').join(", ")),
                1 => format!("buildCoherence:\n[{}]\n", single('\'').join(", ")),
                2 => format!(
                    "Here is the coherence graph for these propositions:\n\n```python\n[{}]\n```\n",
                    single('\'').join(", ")
                ),
                3 => format!("[\n    {}\n]\n", single('"').join(",\n    ")),
                _ => {
                    let mut items = single('\'');
                    if let Some((u, v, r)) = rated.first() {
                        items.push(format!("('{v}', '{u}', {})", 10 - r));
                    }
                    format!("[{}]", items.join(", "))
                }
            }
        })
        .collect()
}

fn graph_over(props: &[Proposition], edges: &[(&str, &str, f64)]) -> CoherenceGraph {
    CoherenceGraph::new(props.to_vec(), edges.iter().copied()).unwrap()
}

fn record_compile(props: &[Proposition], target: &CoherenceGraph, seed: u64, dir: &Path) {
    let responses = script_responses(target, seed);
    let scripted = FnProvider(move |r: &CompletionRequest| Ok(responses[r.sample_index].clone()));
    let recorder = RecordingProvider::new(scripted, dir);
    let mut job = PromptJob::new(props.to_vec(), COMPILE_MODEL);
    job.samples = SAMPLES;
    let sampled = sample_ensemble(&job, &recorder).unwrap();
    assert_eq!(sampled.ensemble.len(), SAMPLES);
    let median = cdi::ensemble::median_graph(&sampled.ensemble);
    let d = cdi::ensemble::l1_distance(&median, target).unwrap();
    assert!(d < 1e-9, "median misses the target by {d}");
}

fn cli(args: &[&str]) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["cdi"];
    argv.extend_from_slice(args);
    let code = cdi::cli::run(argv, &mut out, &mut err);
    let err = String::from_utf8_lossy(&err);
    assert_eq!(code, 0, "cdi {}: {err}", args.join(" "));
    eprint!("{err}");
}

fn golden_run(bundle: &Path, props: &Path, solve_flags: &[&str], dot_name: &str) {
    let golden = bundle.join("golden");
    let run_dir = golden.join("run");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let responses = s(&bundle.join("responses"));
    cli(&[
        "compile", &s(props), "--model", COMPILE_MODEL, "--fixtures", "replay",
        "--fixture-dir", &responses, "--samples", "30", "-o", &s(&run_dir),
    ]);
    fs::remove_file(run_dir.join("manifest.json")).unwrap();
    let median = s(&run_dir.join("median.json"));
    let solve = s(&golden.join("solve.json"));
    let mut args = vec!["solve", median.as_str()];
    args.extend_from_slice(solve_flags);
    args.extend_from_slice(&["-o", solve.as_str()]);
    cli(&args);
    cli(&["render", &median, "--cut-from", &solve, "-o", &s(&golden.join(dot_name))]);
}

fn main() {
    let root = fixtures();
    let props_dir = root.join("propositions");

    let house = CoherenceGraph::new(
        vec![
            Proposition::new("a", "The house is hot."),
            Proposition::new("b", "The house is bright."),
            Proposition::new("c", "The house is cold and dark."),
        ],
        [("a", "b", 1.0), ("a", "c", -1.0), ("b", "c", -1.0)],
    )
    .unwrap();
    write(&root.join("graphs/house.json"), &house.to_json_string());

    let oval_props = read_propositions(&props_dir.join("oval.json")).unwrap();
    let oval = graph_over(&oval_props, &OVAL_EDGES);
    write(&root.join("graphs/oval.json"), &oval.to_json_string());

    let melian_props = read_propositions(&props_dir.join("melian_small.json")).unwrap();
    let melian = graph_over(&melian_props, &MELIAN_EDGES);
    write(&root.join("graphs/melian_small.json"), &melian.to_json_string());

    // Oval: compile fixtures only; the proposition list is given.
    let oval_bundle = root.join("oval");
    let _ = fs::remove_dir_all(oval_bundle.join("responses"));
    let _ = fs::remove_dir_all(oval_bundle.join("golden"));
    record_compile(&oval_props, &oval, 416, &oval_bundle.join("responses"));
    golden_run(
        &oval_bundle,
        &props_dir.join("oval.json"),
        &["--exact", "--quantize", "--priority", "o"],
        "oval.dot",
    );

    // Melian: extraction, then compilation over the extracted list.
    let bundle = root.join("melian");
    let responses = bundle.join("responses");
    let _ = fs::remove_dir_all(&responses);
    let transcript = fs::read_to_string(bundle.join("transcript.txt")).unwrap();
    let mut listing = String::from("Here are the 12 most important propositions:\n\n");
    for p in &melian_props {
        listing.push_str(&format!("- {}: {}\n", p.id, p.text));
    }
    let extractor = RecordingProvider::new(
        FnProvider(move |_: &CompletionRequest| Ok(listing.clone())),
        &responses,
    );
    let request = CompletionRequest::new(build_extraction_prompt(&transcript, Some(12)), EXTRACT_MODEL);
    extractor.complete(&request).unwrap();

    let extracted = bundle.join("golden/propositions.json");
    let _ = fs::remove_dir_all(bundle.join("golden"));
    let s = |p: &Path| p.to_str().unwrap().to_string();
    cli(&[
        "extract", &s(&bundle.join("transcript.txt")), "--model", EXTRACT_MODEL, "--count", "12",
        "--fixtures", "replay", "--fixture-dir", &s(&responses), "-o", &s(&extracted),
    ]);
    let unprivileged = read_propositions(&extracted).unwrap();
    record_compile(&unprivileged, &graph_over(&unprivileged, &MELIAN_EDGES), 1874, &responses);
    golden_run(&bundle, &extracted, &["--exact"], "median.dot");

    eprintln!("fixtures written under {}", root.display());
}
