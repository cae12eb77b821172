//! The rated edge-list wire format: `[('p2', 'p3', 0), ('p2', 'p5', 10)]`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{rating_to_weight, CoherenceGraph, Proposition, RATING_MAX};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatedEdge {
    pub u: String,
    pub v: String,
    pub rating: u8,
}

/// A parsed model response. Pairs are unordered-unique with `u < v`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RatedEdgeList {
    pub triples: Vec<RatedEdge>,
    /// Non-fatal oddities, e.g. repeated pairs that were dropped.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RatedEdgeList {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

/// Renders triples in the wire format.
pub fn render_edge_list(list: &RatedEdgeList) -> String {
    let items: Vec<String> = list
        .triples
        .iter()
        .map(|t| format!("('{}', '{}', {})", t.u, t.v, t.rating))
        .collect();
    format!("[{}]", items.join(", "))
}

/// Extracts the first bracketed tuple list from `raw_text`.
///
/// Surrounding prose and code fences are ignored. Labels may use single or
/// double quotes; ratings must be integers in `0..=10`. Each pair is put in
/// lexicographic order, and when a pair repeats the first occurrence wins
/// and a warning is recorded.
pub fn parse_edge_list(raw_text: &str, propositions: &[Proposition]) -> Result<RatedEdgeList> {
    let start = find_list_start(raw_text).ok_or(Error::UnparseableResponse)?;
    let mut cursor = Cursor {
        text: raw_text,
        pos: start + 1,
    };
    let vocabulary: HashSet<&str> = propositions.iter().map(|p| p.id.as_str()).collect();
    let mut list = RatedEdgeList::default();
    let mut seen: HashMap<(String, String), usize> = HashMap::new();

    cursor.skip_ws();
    if cursor.eat(']') {
        return Ok(list);
    }
    loop {
        let tuple_at = cursor.pos;
        let (a, b, rating) = cursor.tuple()?;
        for label in [&a, &b] {
            if !vocabulary.contains(label.as_str()) {
                return Err(Error::Vocabulary(label.clone()));
            }
        }
        if a == b {
            return Err(Error::MalformedEdgeList {
                offset: tuple_at,
                message: format!("self-pair ({a}, {a})"),
            });
        }
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        if let Some(&first_at) = seen.get(&(u.clone(), v.clone())) {
            list.warnings.push(format!(
                "byte {tuple_at}: repeated pair ({u}, {v}) ignored; kept the one at byte {first_at}"
            ));
        } else {
            seen.insert((u.clone(), v.clone()), tuple_at);
            list.triples.push(RatedEdge { u, v, rating });
        }
        cursor.skip_ws();
        if cursor.eat(',') {
            cursor.skip_ws();
            if cursor.eat(']') {
                break;
            }
            continue;
        }
        if cursor.eat(']') {
            break;
        }
        return Err(cursor.error("expected ',' or ']' after tuple"));
    }
    Ok(list)
}

/// Byte offset of the first `[` that opens a tuple list (next non-space
/// character is `(` or `]`).
fn find_list_start(text: &str) -> Option<usize> {
    text.match_indices('[').map(|(i, _)| i).find(|&i| {
        matches!(
            text[i + 1..].trim_start().chars().next(),
            Some('(') | Some(']')
        )
    })
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn error(&self, message: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("found {c:?}"),
            None => "found end of input".to_string(),
        };
        Error::MalformedEdgeList {
            offset: self.pos,
            message: format!("{message}, {found}"),
        }
    }

    fn tuple(&mut self) -> Result<(String, String, u8)> {
        self.expect('(')?;
        let a = self.label()?;
        self.expect(',')?;
        let b = self.label()?;
        self.expect(',')?;
        let rating = self.rating()?;
        self.skip_ws();
        self.eat(',');
        self.expect(')')?;
        Ok((a, b, rating))
    }

    fn label(&mut self) -> Result<String> {
        self.skip_ws();
        let quote = match self.peek() {
            Some(q @ ('\'' | '"')) => q,
            _ => return Err(self.error("expected a quoted label")),
        };
        let open = self.pos;
        self.pos += 1;
        let rest = &self.text[self.pos..];
        let len = rest.find([quote, '\n']).filter(|&i| rest[i..].starts_with(quote));
        match len {
            Some(len) => {
                let label = rest[..len].to_string();
                self.pos += len + 1;
                Ok(label)
            }
            None => Err(Error::MalformedEdgeList {
                offset: open,
                message: "unterminated label".into(),
            }),
        }
    }

    fn rating(&mut self) -> Result<u8> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let digits = &self.text[start..end];
        if digits.is_empty() || digits == "-" || digits == "+" {
            return Err(self.error("expected an integer rating"));
        }
        if end < bytes.len() && (bytes[end] == b'.' || bytes[end].is_ascii_alphabetic()) {
            self.pos = end;
            return Err(self.error("rating must be an integer"));
        }
        let value: i64 = digits.parse().map_err(|_| Error::MalformedEdgeList {
            offset: start,
            message: format!("rating {digits:?} does not fit an integer"),
        })?;
        if !(0..=RATING_MAX).contains(&value) {
            return Err(Error::InvalidRating(value));
        }
        self.pos = end;
        Ok(value as u8)
    }
}

/// Turns a rated edge list into a graph over every proposition, isolated
/// ones included, with weights `(rating - 5) / 5`.
pub fn compile_graph(list: &RatedEdgeList, propositions: &[Proposition]) -> Result<CoherenceGraph> {
    let edges = list
        .triples
        .iter()
        .map(|t| Ok((t.u.as_str(), t.v.as_str(), rating_to_weight(t.rating as i64)?)))
        .collect::<Result<Vec<_>>>()?;
    CoherenceGraph::new(propositions.to_vec(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_EXAMPLE: &str = "[('p2', 'p3', 0), ('p2', 'p5', 10), ('p3', 'p4', 9), ('p3', 'p5', 2)]";

    fn vocab(ids: &[&str]) -> Vec<Proposition> {
        ids.iter().map(|id| Proposition::new(*id, *id)).collect()
    }

    fn p2to5() -> Vec<Proposition> {
        vocab(&["p2", "p3", "p4", "p5"])
    }

    #[test]
    fn the_documented_example() {
        let list = parse_edge_list(TABLE_EXAMPLE, &p2to5()).unwrap();
        assert_eq!(list.len(), 4);
        assert_eq!(
            list.triples[0],
            RatedEdge {
                u: "p2".into(),
                v: "p3".into(),
                rating: 0
            }
        );
        let ratings: Vec<u8> = list.triples.iter().map(|t| t.rating).collect();
        assert_eq!(ratings, vec![0, 10, 9, 2]);
        assert_eq!(render_edge_list(&list), TABLE_EXAMPLE);

        let g = compile_graph(&list, &p2to5()).unwrap();
        assert_eq!(g.edge_count(), 4);
        let w: Vec<f64> = g.edges().map(|e| e.weight).collect();
        assert_eq!(w, vec![-1.0, 1.0, 0.8, -0.6]);
    }

    #[test]
    fn empty_list() {
        let list = parse_edge_list("[]", &p2to5()).unwrap();
        assert!(list.is_empty());
        let g = compile_graph(&list, &vocab(&["a", "b", "c"])).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn pairs_are_normalized() {
        let list = parse_edge_list("[('p3','p2',7)]", &p2to5()).unwrap();
        assert_eq!(
            list.triples,
            vec![RatedEdge {
                u: "p2".into(),
                v: "p3".into(),
                rating: 7
            }]
        );
    }

    #[test]
    fn tolerates_prose_and_fences() {
        let raw = "Here is the graph you asked for [as requested]:\n```python\n[(\"a\", 'b', 8),]\n```\nDone.";
        let list = parse_edge_list(raw, &vocab(&["a", "b"])).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list.triples[0].rating, 8);
    }

    #[test]
    fn duplicates_keep_first() {
        let list =
            parse_edge_list("[('p2', 'p3', 1), ('p3', 'p2', 9), ('p2', 'p4', 5)]", &p2to5()).unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list.triples[0].rating, 1);
        assert_eq!(list.warnings.len(), 1);
    }

    #[test]
    fn error_cases() {
        let v = p2to5();
        assert!(matches!(parse_edge_list("no list here", &v), Err(Error::UnparseableResponse)));
        assert!(matches!(parse_edge_list("[note] only", &v), Err(Error::UnparseableResponse)));
        assert!(matches!(
            parse_edge_list("[('p2', 'zz', 3)]", &v),
            Err(Error::Vocabulary(l)) if l == "zz"
        ));
        assert!(matches!(
            parse_edge_list("[('p2', 'p3', 11)]", &v),
            Err(Error::InvalidRating(11))
        ));
        assert!(matches!(
            parse_edge_list("[('p2', 'p3', -1)]", &v),
            Err(Error::InvalidRating(-1))
        ));
        match parse_edge_list("xx [('p2', 'p3' 4)]", &v) {
            Err(Error::MalformedEdgeList { offset, .. }) => assert_eq!(offset, 16),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_edge_list("[('p2', 'p3', 4.5)]", &v),
            Err(Error::MalformedEdgeList { .. })
        ));
        assert!(matches!(
            parse_edge_list("[('p2', 'p2', 4)]", &v),
            Err(Error::MalformedEdgeList { .. })
        ));
        assert!(matches!(
            parse_edge_list("[('p2', 'p3', 4)", &v),
            Err(Error::MalformedEdgeList { .. })
        ));
        assert!(matches!(
            parse_edge_list("[('p2, 'p3', 4)]", &v),
            Err(Error::MalformedEdgeList { .. }) | Err(Error::Vocabulary(_))
        ));
    }
}
