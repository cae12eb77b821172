//! Graphviz export.
//!
//! Positive edges are solid, negative edges dashed. Color runs from red
//! (-1) through purple to blue (+1) and opacity tracks `|w|`. When a cut is
//! supplied, accepted vertices are shaded and crossing edges carry
//! `class="cut"` plus a `(cut)` suffix on their label.

use std::fmt::Write;

use super::{Bipartition, CoherenceGraph};

pub fn to_dot(graph: &CoherenceGraph, cut: Option<&Bipartition>) -> String {
    let mut out = String::new();
    out.push_str("graph coherence {\n");
    out.push_str("  layout=circo;\n");
    out.push_str("  node [shape=circle, style=filled, fillcolor=\"#ffffff\"];\n");
    out.push_str("  edge [penwidth=3];\n");
    if let Some(cut) = cut {
        let _ = writeln!(
            out,
            "  label=\"accepted: {} | rejected: {}\";",
            join(cut.accepted().iter()),
            join(cut.rejected().iter())
        );
    }
    for p in graph.propositions() {
        let mut attrs = vec![
            format!("label=\"{}\"", escape(&p.id)),
            format!("tooltip=\"{}\"", escape(&p.text)),
        ];
        if p.privileged {
            attrs.push("color=\"#0000ff\"".into());
        }
        if let Some(cut) = cut {
            let fill = if cut.is_accepted(&p.id) { "#d9d9d9" } else { "#ffffff" };
            attrs.push(format!("fillcolor=\"{fill}\""));
        }
        let _ = writeln!(out, "  \"{}\" [{}];", escape(&p.id), attrs.join(", "));
    }
    for e in graph.edges() {
        let style = if e.weight < 0.0 { "dashed" } else { "solid" };
        let crossing = cut.is_some_and(|c| c.separates(e.u, e.v));
        let mut label = format_weight(e.weight);
        if crossing {
            label.push_str(" (cut)");
        }
        let mut attrs = vec![
            format!("style={style}"),
            format!("color=\"{}\"", edge_color(e.weight)),
            format!("label=\"{label}\""),
        ];
        if crossing {
            attrs.push("class=\"cut\"".into());
        }
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [{}];",
            escape(e.u),
            escape(e.v),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    out
}

fn join<'a>(ids: impl Iterator<Item = &'a String>) -> String {
    ids.map(|s| escape(s)).collect::<Vec<_>>().join(", ")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out
}

/// `#RRGGBBAA`, red for -1, blue for +1, alpha = |w|.
fn edge_color(w: f64) -> String {
    let byte = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!(
        "#{:02x}00{:02x}{:02x}",
        byte(0.5 - w / 2.0),
        byte(0.5 + w / 2.0),
        byte(w.abs())
    )
}

/// Signed weight with at most two decimals and no trailing zeros.
pub(crate) fn format_weight(w: f64) -> String {
    let s = format!("{:+.2}", w);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "+" || s == "-" || s == "-0" || s == "+0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Like [`format_weight`] without the leading `+`.
pub(crate) fn format_weight_plain(w: f64) -> String {
    format_weight(w).trim_start_matches('+').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_has_no_nodes() {
        let g = CoherenceGraph::from_ids(&[], Vec::<(&str, &str, f64)>::new()).unwrap();
        let dot = to_dot(&g, None);
        assert!(dot.starts_with("graph coherence {"));
        assert!(!dot.contains("label=\""));
        assert!(!dot.contains("--"));
    }

    #[test]
    fn solid_and_dashed_by_sign() {
        let g = CoherenceGraph::from_ids(
            &["a", "b", "c"],
            [("a", "b", 1.0), ("a", "c", -1.0), ("b", "c", -1.0)],
        )
        .unwrap();
        let dot = to_dot(&g, None);
        assert_eq!(dot.matches("style=solid").count(), 1);
        assert_eq!(dot.matches("style=dashed").count(), 2);
        assert!(dot.contains("color=\"#0000ffff\""));
        assert!(dot.contains("color=\"#ff0000ff\""));
    }

    #[test]
    fn weight_labels() {
        assert_eq!(format_weight(1.0), "+1");
        assert_eq!(format_weight(-0.4), "-0.4");
        assert_eq!(format_weight(0.7000000000000001), "+0.7");
        assert_eq!(format_weight(0.25), "+0.25");
        assert_eq!(format_weight(0.0), "0");
    }

    #[test]
    fn text_is_escaped() {
        let g = CoherenceGraph::new(
            vec![super::super::Proposition::new("q", "say \"hi\"\nnow")],
            Vec::<(&str, &str, f64)>::new(),
        )
        .unwrap();
        assert!(to_dot(&g, None).contains("tooltip=\"say \\\"hi\\\"\\nnow\""));
    }
}
