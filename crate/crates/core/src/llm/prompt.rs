use crate::error::{Error, Result};
use crate::graph::Proposition;

const COHERENCE_PROMPT: &str = include_str!("coherence_prompt.txt");
const EXTRACTION_PROMPT: &str = include_str!("extraction_prompt.txt");

/// The graph-compilation prompt followed by one `- <id>: <text>` line per
/// proposition.
pub fn build_prompt(propositions: &[Proposition]) -> Result<String> {
    if propositions.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "a coherence prompt needs at least 2 propositions, got {}",
            propositions.len()
        )));
    }
    let mut out = String::from(COHERENCE_PROMPT);
    push_propositions(&mut out, propositions);
    Ok(out)
}

pub(crate) fn push_propositions(out: &mut String, propositions: &[Proposition]) {
    for p in propositions {
        out.push_str("- ");
        out.push_str(&p.id);
        out.push_str(": ");
        out.push_str(&one_line(&p.text));
        out.push('\n');
    }
}

/// Prompt asking for a labeled proposition list from a transcript.
pub fn build_extraction_prompt(transcript: &str, target_count_hint: Option<usize>) -> String {
    let count = target_count_hint.map(|n| format!("{n} ")).unwrap_or_default();
    let mut out = EXTRACTION_PROMPT.replace("{count} ", &count);
    out.push_str(transcript.trim_end());
    out.push('\n');
    out
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn props(ids: &[&str]) -> Vec<Proposition> {
        ids.iter().map(|id| Proposition::new(*id, format!("text of {id}"))).collect()
    }

    #[test]
    fn ends_with_labeled_lines() {
        let p = build_prompt(&props(&["a", "e", "k", "o", "p", "r"])).unwrap();
        let tail: Vec<&str> = p.lines().rev().take(7).collect();
        assert_eq!(tail[6], "buildCoherence:");
        assert_eq!(tail[0], "- r: text of r");
        assert!(p.contains(
            "Order vertices (in edges) and edges (in the graph) lexicographically."
        ));
        assert!(p.starts_with("Imagine that you are a perfectly objective arbitrator"));
        assert!(p.contains("[('p2', 'p3', 0), ('p2', 'p5', 10), ('p3', 'p4', 9), ('p3', 'p5', 2)]"));
    }

    #[test]
    fn two_propositions_each_listed_once() {
        let p = build_prompt(&props(&["x1", "y1"])).unwrap();
        assert_eq!(p.matches("- x1: ").count(), 1);
        assert_eq!(p.matches("- y1: ").count(), 1);
        assert_eq!(p, build_prompt(&props(&["x1", "y1"])).unwrap());
    }

    #[test]
    fn too_few_propositions() {
        assert!(build_prompt(&props(&["a"])).is_err());
        assert!(build_prompt(&[]).is_err());
    }

    #[test]
    fn multiline_text_is_flattened() {
        let p = build_prompt(&[Proposition::new("a", "one\ntwo  three"), Proposition::new("b", "b")])
            .unwrap();
        assert!(p.contains("- a: one two three\n"));
    }

    #[test]
    fn extraction_prompt_hint() {
        let with = build_extraction_prompt("Some words.", Some(12));
        assert!(with.contains("list the 12 most important"));
        let without = build_extraction_prompt("Some words.", None);
        assert!(without.contains("list the most important"));
        assert!(without.ends_with("Transcript:\nSome words.\n"));
    }
}
