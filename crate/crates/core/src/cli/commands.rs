use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::manifest::RunManifest;
use super::{CompileArgs, DiagnoseArgs, ExtractArgs, ProviderArgs, RenderArgs, SolveArgs};
use crate::ensemble::{convergence_diagnostic, median_graph, GraphEnsemble};
use crate::error::{Error, Result};
use crate::graph::{quantize, to_dot, Bipartition, CoherenceGraph, Proposition, WeightScale};
use crate::llm::{self, CompletionProvider, PromptJob};
use crate::solver::{gibbs, solve_exact, solve_heuristic_with_priority, CutReport, GibbsResult, SolverConfig};

#[derive(Debug, Serialize, Deserialize)]
struct PropositionFile {
    propositions: Vec<Proposition>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolveOutput {
    report: CutReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gibbs: Option<GibbsResult>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::write(path, body).map_err(|e| Error::io(path, e))
        }
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn provider_for(args: &ProviderArgs) -> Result<Box<dyn CompletionProvider>> {
    llm::build_provider(args.fixture_mode, args.fixture_dir.as_deref(), args.base_url.as_deref())
}

/// Reads `{"propositions": [...]}` (a graph file works too; its edges are
/// ignored) or a bare array of propositions.
pub fn read_propositions(path: &Path) -> Result<Vec<Proposition>> {
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::schema(format!("{}: document", path.display()), e.to_string()))?;
    let list = match value {
        serde_json::Value::Object(mut obj) => obj
            .remove("propositions")
            .ok_or_else(|| Error::schema(format!("{}: propositions", path.display()), "missing"))?,
        other => other,
    };
    let props: Vec<Proposition> = serde_json::from_value(list)
        .map_err(|e| Error::schema(format!("{}: propositions", path.display()), e.to_string()))?;
    CoherenceGraph::isolated(props.clone()).map_err(|e| {
        Error::schema(format!("{}: propositions", path.display()), e.to_string())
    })?;
    Ok(props)
}

pub fn cmd_extract(args: &ExtractArgs, stdout: &mut dyn Write) -> Result<()> {
    let transcript = read_text(&args.transcript)?;
    if transcript.trim().is_empty() {
        return Err(Error::InvalidParameter(format!(
            "{} is empty",
            args.transcript.display()
        )));
    }
    let provider = provider_for(&args.provider)?;
    let propositions =
        llm::extract_propositions(&transcript, provider.as_ref(), &args.provider.model, args.count)?;
    emit(args.out.as_deref(), &pretty(&PropositionFile { propositions })?, stdout)
}

fn clear_dir(dir: &Path) -> Result<()> {
    if dir.exists() {
        fs::remove_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes, under `args.out`: `manifest.json` (first), `samples/`,
/// `raw/`, `samples.json`, and `median.json`.
pub fn cmd_compile(args: &CompileArgs, stderr: &mut dyn Write) -> Result<()> {
    let propositions = read_propositions(&args.propositions)?;
    let mut job = PromptJob::new(propositions, args.provider.model.clone());
    job.samples = args.samples;
    job.max_retries = args.max_retries;
    job.parallelism = args.parallelism;
    job.fixture_mode = args.provider.fixture_mode;
    if let Some(seed) = args.seed {
        job.options.insert("seed".into(), json!(seed));
    }
    if let Some(t) = args.temperature {
        job.options.insert("temperature".into(), json!(t));
    }
    job.validate()?;
    llm::build_prompt(&job.propositions)?;

    let out = &args.out;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: "compile".into(),
        inputs: vec![args.propositions.display().to_string()],
        model: job.model.clone(),
        samples: job.samples,
        seed: args.seed,
        fixture_mode: job.fixture_mode,
        fixture_dir: args.provider.fixture_dir.as_ref().map(|p| p.display().to_string()),
        output_dir: out.display().to_string(),
        config: json!({
            "max_retries": job.max_retries,
            "parallelism": job.parallelism,
            "options": job.options,
            "base_url": args.provider.base_url,
        }),
        started_at: RunManifest::now(),
        finished_at: None,
        kept_samples: None,
    };
    let manifest_path = out.join("manifest.json");
    manifest.write(&manifest_path)?;

    let provider = provider_for(&args.provider)?;
    let sampled = llm::sample_ensemble(&job, provider.as_ref())?;

    let samples_dir = out.join("samples");
    let raw_dir = out.join("raw");
    clear_dir(&samples_dir)?;
    clear_dir(&raw_dir)?;
    let kept = sampled.kept_indices();
    for (graph, index) in sampled.ensemble.samples().iter().zip(&kept) {
        let path = samples_dir.join(format!("sample_{index:03}.json"));
        fs::write(&path, graph.to_json_string()).map_err(|e| Error::io(&path, e))?;
    }
    for record in &sampled.records {
        if let Some(raw) = &record.raw_text {
            let path = raw_dir.join(format!("sample_{:03}.txt", record.index));
            fs::write(&path, raw).map_err(|e| Error::io(&path, e))?;
        }
    }
    let index: Vec<_> = sampled
        .records
        .iter()
        .map(|r| {
            json!({
                "index": r.index,
                "attempts": r.attempts,
                "kept": r.error.is_none(),
                "error": r.error,
                "warnings": r.edge_list.as_ref().map(|l| l.warnings.clone()).unwrap_or_default(),
            })
        })
        .collect();
    let index_path = out.join("samples.json");
    fs::write(&index_path, pretty(&index)?).map_err(|e| Error::io(&index_path, e))?;

    let median = median_graph(&sampled.ensemble);
    let median_path = out.join("median.json");
    fs::write(&median_path, median.to_json_string()).map_err(|e| Error::io(&median_path, e))?;

    manifest.finished_at = Some(RunManifest::now());
    manifest.kept_samples = Some(kept.len());
    manifest.write(&manifest_path)?;

    for d in &sampled.diagnostics {
        let _ = writeln!(stderr, "warning: {d}");
    }
    let _ = writeln!(
        stderr,
        "kept {} of {} samples; median graph has {} edges -> {}",
        kept.len(),
        job.samples,
        median.edge_count(),
        median_path.display()
    );
    Ok(())
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let mut graph = CoherenceGraph::read_json(&args.graph)?;
    if args.quantize {
        graph = quantize(&graph, &WeightScale::default());
    }
    let config = SolverConfig::default()
        .with_seed(args.seed)
        .with_restarts(args.restarts);
    let priority: Vec<String> = match &args.priority {
        Some(ids) => ids.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => graph.privileged_ids().into_iter().map(String::from).collect(),
    };
    let priority_refs: Vec<&str> = priority.iter().map(String::as_str).collect();
    let priority_opt = (!priority_refs.is_empty()).then_some(priority_refs.as_slice());

    let exact = if args.exact {
        true
    } else if args.heuristic {
        false
    } else {
        graph.len() <= config.exact_vertex_limit
    };
    let report = if exact {
        solve_exact(&graph, &config, priority_opt)?
    } else {
        solve_heuristic_with_priority(&graph, &config, priority_opt)?
    };
    let gibbs = match args.gibbs {
        Some(beta) => Some(gibbs(&graph, beta, &config, priority_opt)?),
        None => None,
    };
    let _ = write!(stderr, "{}", report.summary());
    if let Some(g) = &gibbs {
        let _ = writeln!(stderr, "  acceptance marginals at beta {}:", g.beta);
        for (id, p) in &g.acceptance_marginals {
            let _ = writeln!(stderr, "    {id}: {p:.4}");
        }
    }
    emit(args.out.as_deref(), &pretty(&SolveOutput { report, gibbs })?, stdout)
}

fn graph_files(dir: &Path) -> Result<Vec<PathBuf>> {
    const SKIP: [&str; 4] = ["manifest.json", "median.json", "samples.json", "convergence.json"];
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if path.is_file() && name.ends_with(".json") && !SKIP.contains(&name) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn cmd_diagnose(args: &DiagnoseArgs, stderr: &mut dyn Write) -> Result<()> {
    let nested = args.ensemble_dir.join("samples");
    let dir = if nested.is_dir() { nested } else { args.ensemble_dir.clone() };
    let files = graph_files(&dir)?;
    if files.len() < 3 {
        return Err(Error::InsufficientSamples(files.len()));
    }
    let graphs = files
        .iter()
        .map(CoherenceGraph::read_json)
        .collect::<Result<Vec<_>>>()?;
    let ensemble = GraphEnsemble::new(graphs)?;
    let report = convergence_diagnostic(&ensemble, args.cap, args.seed)?;

    let out = args.out.as_deref().unwrap_or(&args.ensemble_dir);
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let json_path = out.join("convergence.json");
    fs::write(&json_path, pretty(&report)?).map_err(|e| Error::io(&json_path, e))?;
    let csv_path = out.join("convergence.csv");
    fs::write(&csv_path, report.to_csv()).map_err(|e| Error::io(&csv_path, e))?;

    let _ = writeln!(stderr, "{} samples; median distance to the full median by n:", report.samples);
    for (n, d) in report.median_curve() {
        let _ = writeln!(stderr, "  n={n:>3}  {d:.3}");
    }
    Ok(())
}

/// Reads the cut from a solve output (`{"report": ...}`) or a bare report.
fn read_cut(path: &Path, graph: &CoherenceGraph) -> Result<Bipartition> {
    let text = read_text(path)?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::schema(format!("{}: document", path.display()), e.to_string()))?;
    if let Some(inner) = value.get_mut("report") {
        value = inner.take();
    }
    let report: CutReport = serde_json::from_value(value)
        .map_err(|e| Error::schema(format!("{}: report", path.display()), e.to_string()))?;
    for id in report.cut.accepted().iter().chain(report.cut.rejected()) {
        if !graph.contains(id) {
            return Err(Error::schema(
                format!("{}: report.cut", path.display()),
                format!("{id:?} is not a vertex of the graph"),
            ));
        }
    }
    Bipartition::new(graph, report.cut.accepted())
}

pub fn cmd_render(args: &RenderArgs, stdout: &mut dyn Write) -> Result<()> {
    let graph = CoherenceGraph::read_json(&args.graph)?;
    let cut = match &args.cut_from {
        Some(path) => Some(read_cut(path, &graph)?),
        None => None,
    };
    emit(args.out.as_deref(), &to_dot(&graph, cut.as_ref()), stdout)
}
