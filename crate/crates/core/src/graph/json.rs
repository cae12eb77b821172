//! JSON schema:
//! `{"propositions":[{"id","text","privileged"}],"edges":[{"u","v","weight"}]}`.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_weight, validate_id, CoherenceGraph, Proposition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub weight: f64,
}

/// Wire form of a [`CoherenceGraph`], before invariant checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub propositions: Vec<Proposition>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

impl GraphDocument {
    /// Validates the document, naming the offending field on failure.
    pub fn into_graph(self) -> Result<CoherenceGraph> {
        let mut index = HashMap::new();
        for (i, p) in self.propositions.iter().enumerate() {
            validate_id(&p.id)
                .map_err(|e| Error::schema(format!("propositions[{i}].id"), e.to_string()))?;
            if index.insert(p.id.as_str(), i).is_some() {
                return Err(Error::schema(
                    format!("propositions[{i}].id"),
                    format!("duplicate id {:?}", p.id),
                ));
            }
        }
        let mut edges = BTreeMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            let end = |id: &str, side: &str| {
                index.get(id).copied().ok_or_else(|| {
                    Error::schema(format!("edges[{k}].{side}"), format!("unknown proposition {id:?}"))
                })
            };
            let i = end(&e.u, "u")?;
            let j = end(&e.v, "v")?;
            if i == j {
                return Err(Error::schema(format!("edges[{k}]"), "self-loop"));
            }
            check_weight(e.weight).map_err(|m| Error::schema(format!("edges[{k}].weight"), m))?;
            if edges.insert((i.min(j), i.max(j)), e.weight).is_some() {
                return Err(Error::schema(
                    format!("edges[{k}]"),
                    format!("duplicate edge {}-{}", e.u, e.v),
                ));
            }
        }
        Ok(CoherenceGraph::from_parts(self.propositions, edges))
    }
}

impl From<&CoherenceGraph> for GraphDocument {
    fn from(g: &CoherenceGraph) -> Self {
        GraphDocument {
            propositions: g.propositions().to_vec(),
            edges: g
                .edges()
                .map(|e| EdgeRecord {
                    u: e.u.to_string(),
                    v: e.v.to_string(),
                    weight: e.weight,
                })
                .collect(),
        }
    }
}

impl CoherenceGraph {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(s).map_err(|e| Error::schema("document", e.to_string()))?;
        doc.into_graph()
    }

    /// Pretty-printed JSON with a trailing newline. Edges appear in vertex
    /// declaration order, so output is deterministic.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&GraphDocument::from(self))
            .expect("graph documents always serialize");
        s.push('\n');
        s
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        CoherenceGraph::from_json_str(&text).map_err(|e| match e {
            Error::Schema { field, message } => Error::Schema {
                field: format!("{}: {field}", path.display()),
                message,
            },
            other => other,
        })
    }
}

impl Serialize for CoherenceGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphDocument::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoherenceGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        GraphDocument::deserialize(deserializer)?
            .into_graph()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = r#"{
  "propositions": [
    {"id": "a", "text": "The house is hot", "privileged": false},
    {"id": "b", "text": "The house is bright", "privileged": false},
    {"id": "c", "text": "The house is cold and dark", "privileged": false}
  ],
  "edges": [
    {"u": "a", "v": "b", "weight": 1.0},
    {"u": "a", "v": "c", "weight": -1.0},
    {"u": "b", "v": "c", "weight": -1.0}
  ]
}"#;

    #[test]
    fn parses_three_vertex_document() {
        let g = CoherenceGraph::from_json_str(FIG2).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 3);
        let again = CoherenceGraph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(again, g);
    }

    fn field_of(doc: &str) -> String {
        match CoherenceGraph::from_json_str(doc) {
            Err(Error::Schema { field, .. }) => field,
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_the_field() {
        let heavy = FIG2.replacen("\"weight\": -1.0", "\"weight\": 1.5", 1);
        assert_eq!(field_of(&heavy), "edges[1].weight");
        let unknown = FIG2.replacen("\"v\": \"c\"", "\"v\": \"z\"", 1);
        assert_eq!(field_of(&unknown), "edges[1].v");
        let bad_id = FIG2.replacen("\"id\": \"b\"", "\"id\": \"b b\"", 1);
        assert_eq!(field_of(&bad_id), "propositions[1].id");
        let missing = r#"{"propositions":[{"id":"a","text":"x"}],"edges":[{"u":"a","v":"a"}]}"#;
        assert_eq!(field_of(missing), "document");
    }

    #[test]
    fn privileged_defaults_to_false() {
        let g = CoherenceGraph::from_json_str(r#"{"propositions":[{"id":"o","text":"t"}]}"#).unwrap();
        assert!(!g.propositions()[0].privileged);
        assert_eq!(g.edge_count(), 0);
    }
}
