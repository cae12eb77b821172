//! Coherence graphs over propositions and the cut objective.
//!
//! A [`CoherenceGraph`] is an undirected graph whose vertices are
//! [`Proposition`]s and whose edge weights lie in `[-1, 1]`: positive weights
//! mark consistent pairs, negative weights inconsistent ones. A missing edge
//! behaves exactly like an edge of weight zero everywhere in this crate.
//!
//! The coherence of a [`Bipartition`] `{U, V - U}` is the negated total
//! weight of the edges with exactly one endpoint in `U`.

pub(crate) mod dot;
mod json;
mod weights;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dot::to_dot;
pub use json::{GraphDocument, EdgeRecord};
pub use weights::{quantize, rating_to_weight, WeightScale, RATING_MAX};

/// A labeled proposition. `privileged` marks externally established facts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub privileged: bool,
}

impl Proposition {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Proposition {
            id: id.into(),
            text: text.into(),
            privileged: false,
        }
    }

    pub fn privileged(mut self) -> Self {
        self.privileged = true;
        self
    }
}

/// Checks that `id` can travel through the edge-list wire format unchanged.
pub fn validate_id(id: &str) -> Result<()> {
    let reason = if id.is_empty() {
        Some("empty")
    } else if id.chars().any(char::is_whitespace) {
        Some("contains whitespace")
    } else if id.chars().any(|c| matches!(c, ',' | '\'' | '"' | '(' | ')')) {
        Some("contains a comma, quote, or parenthesis")
    } else {
        None
    };
    match reason {
        Some(reason) => Err(Error::InvalidId {
            id: id.to_string(),
            reason,
        }),
        None => Ok(()),
    }
}

/// An undirected weighted graph over an ordered list of propositions.
///
/// Vertices keep the order they were declared in; edges are keyed by vertex
/// index with the smaller index first.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceGraph {
    propositions: Vec<Proposition>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), f64>,
}

/// Borrowed view of one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<'a> {
    pub u: &'a str,
    pub v: &'a str,
    pub weight: f64,
}

impl CoherenceGraph {
    /// Builds a graph, rejecting duplicate or malformed ids, self-loops,
    /// repeated pairs, unknown endpoints, and weights outside `[-1, 1]`.
    pub fn new<I, S, T>(propositions: Vec<Proposition>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T, f64)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut graph = CoherenceGraph::isolated(propositions)?;
        for (u, v, w) in edges {
            graph.insert_edge(u.as_ref(), v.as_ref(), w)?;
        }
        Ok(graph)
    }

    /// A graph with the given vertices and no edges.
    pub fn isolated(propositions: Vec<Proposition>) -> Result<Self> {
        let mut index = HashMap::with_capacity(propositions.len());
        for (i, p) in propositions.iter().enumerate() {
            validate_id(&p.id)?;
            if index.insert(p.id.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate proposition id {:?}", p.id)));
            }
        }
        Ok(CoherenceGraph {
            propositions,
            index,
            edges: BTreeMap::new(),
        })
    }

    /// Convenience constructor for tests and examples: vertices are bare ids
    /// with the id doubling as the text.
    pub fn from_ids<I, S, T>(ids: &[&str], edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T, f64)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let props = ids.iter().map(|id| Proposition::new(*id, *id)).collect();
        CoherenceGraph::new(props, edges)
    }

    fn insert_edge(&mut self, u: &str, v: &str, weight: f64) -> Result<()> {
        let i = self.require(u)?;
        let j = self.require(v)?;
        if i == j {
            return Err(Error::InvalidGraph(format!("self-loop on {u:?}")));
        }
        check_weight(weight).map_err(|m| Error::InvalidGraph(format!("edge {u}-{v}: {m}")))?;
        let key = (i.min(j), i.max(j));
        if self.edges.insert(key, weight).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate edge {u}-{v}")));
        }
        Ok(())
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub(crate) fn from_parts(
        propositions: Vec<Proposition>,
        edges: BTreeMap<(usize, usize), f64>,
    ) -> Self {
        let index = propositions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), i))
            .collect();
        CoherenceGraph {
            propositions,
            index,
            edges,
        }
    }

    pub fn propositions(&self) -> &[Proposition] {
        &self.propositions
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.propositions.iter().map(|p| p.id.as_str())
    }

    pub fn len(&self) -> usize {
        self.propositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.propositions.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Ids of the privileged propositions, in declaration order.
    pub fn privileged_ids(&self) -> Vec<&str> {
        self.propositions
            .iter()
            .filter(|p| p.privileged)
            .map(|p| p.id.as_str())
            .collect()
    }

    /// Weight between two vertices; zero for absent edges and unknown ids.
    pub fn weight(&self, u: &str, v: &str) -> f64 {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.weight_at(i, j),
            _ => 0.0,
        }
    }

    pub fn weight_at(&self, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        self.edges.get(&key).copied().unwrap_or(0.0)
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.edges.contains_key(&(i.min(j), i.max(j))),
            _ => false,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge<'_>> + '_ {
        self.edges.iter().map(|(&(i, j), &weight)| Edge {
            u: &self.propositions[i].id,
            v: &self.propositions[j].id,
            weight,
        })
    }

    /// Edges by vertex index, smaller index first.
    pub fn indexed_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    /// Dense symmetric adjacency matrix in row-major order.
    pub fn adjacency(&self) -> Vec<f64> {
        let n = self.len();
        let mut a = vec![0.0; n * n];
        for (i, j, w) in self.indexed_edges() {
            a[i * n + j] = w;
            a[j * n + i] = w;
        }
        a
    }

    /// Multiplies every weight by `factor`. Fails if a result leaves `[-1, 1]`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut edges = BTreeMap::new();
        for (&key, &w) in &self.edges {
            let scaled = w * factor;
            check_weight(scaled).map_err(Error::InvalidGraph)?;
            edges.insert(key, scaled);
        }
        Ok(CoherenceGraph::from_parts(self.propositions.clone(), edges))
    }

    /// The same graph with an extra edgeless vertex appended.
    pub fn with_isolated_vertex(&self, proposition: Proposition) -> Result<Self> {
        validate_id(&proposition.id)?;
        if self.contains(&proposition.id) {
            return Err(Error::InvalidGraph(format!(
                "duplicate proposition id {:?}",
                proposition.id
            )));
        }
        let mut props = self.propositions.clone();
        props.push(proposition);
        Ok(CoherenceGraph::from_parts(props, self.edges.clone()))
    }

    /// Copy of the graph with the privileged flag set on exactly `ids`.
    pub fn with_privileged(&self, ids: &[&str]) -> Result<Self> {
        for id in ids {
            self.require(id)?;
        }
        let props = self
            .propositions
            .iter()
            .map(|p| Proposition {
                privileged: ids.contains(&p.id.as_str()),
                ..p.clone()
            })
            .collect();
        Ok(CoherenceGraph::from_parts(props, self.edges.clone()))
    }

    /// Lexicographically smallest vertex id.
    pub fn min_id(&self) -> Option<&str> {
        self.ids().min()
    }

    /// Vertex index with the lexicographically smallest id.
    pub(crate) fn min_id_index(&self) -> Option<usize> {
        self.min_id().and_then(|id| self.index_of(id))
    }

    pub(crate) fn edge_map(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.edges
    }
}

pub(crate) fn check_weight(w: f64) -> std::result::Result<(), String> {
    if !w.is_finite() {
        Err(format!("weight {w} is not finite"))
    } else if !(-1.0..=1.0).contains(&w) {
        Err(format!("weight {w} outside [-1, 1]"))
    } else {
        Ok(())
    }
}

/// An unordered split of the vertex set into an accepted part and its
/// complement.
///
/// Equality and hashing ignore orientation: `{U, V - U}` equals
/// `{V - U, U}`. Orientation still matters for reporting which side is
/// accepted; [`Bipartition::canonical`] puts the lexicographically smallest
/// id on the accepted side and [`Bipartition::oriented_toward`] applies a
/// priority set instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bipartition {
    accepted: BTreeSet<String>,
    rejected: BTreeSet<String>,
}

impl Bipartition {
    /// Splits `graph`'s vertices into `accepted` and everything else.
    pub fn new<I, S>(graph: &CoherenceGraph, accepted: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut acc = BTreeSet::new();
        for id in accepted {
            let id = id.as_ref();
            if !graph.contains(id) {
                return Err(Error::InvalidPartition(format!("{id:?} is not a vertex of the graph")));
            }
            acc.insert(id.to_string());
        }
        let rejected = graph
            .ids()
            .filter(|id| !acc.contains(*id))
            .map(str::to_string)
            .collect();
        Ok(Bipartition {
            accepted: acc,
            rejected,
        })
    }

    /// Builds a bipartition from explicit sides without reference to a graph.
    pub fn from_sides<I, J, S, T>(accepted: I, rejected: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let accepted: BTreeSet<String> = accepted.into_iter().map(Into::into).collect();
        let rejected: BTreeSet<String> = rejected.into_iter().map(Into::into).collect();
        if let Some(both) = accepted.intersection(&rejected).next() {
            return Err(Error::InvalidPartition(format!("{both:?} appears on both sides")));
        }
        Ok(Bipartition { accepted, rejected })
    }

    /// Bipartition from a membership mask over vertex indices
    /// (`true` = accepted).
    pub(crate) fn from_mask(graph: &CoherenceGraph, accepted: impl Fn(usize) -> bool) -> Self {
        let mut acc = BTreeSet::new();
        let mut rej = BTreeSet::new();
        for (i, p) in graph.propositions().iter().enumerate() {
            if accepted(i) {
                acc.insert(p.id.clone());
            } else {
                rej.insert(p.id.clone());
            }
        }
        Bipartition {
            accepted: acc,
            rejected: rej,
        }
    }

    pub fn accepted(&self) -> &BTreeSet<String> {
        &self.accepted
    }

    pub fn rejected(&self) -> &BTreeSet<String> {
        &self.rejected
    }

    pub fn is_accepted(&self, id: &str) -> bool {
        self.accepted.contains(id)
    }

    /// True when `u` and `v` sit on different sides.
    pub fn separates(&self, u: &str, v: &str) -> bool {
        self.accepted.contains(u) != self.accepted.contains(v)
    }

    /// Swaps the accepted and rejected sides.
    pub fn flipped(&self) -> Self {
        Bipartition {
            accepted: self.rejected.clone(),
            rejected: self.accepted.clone(),
        }
    }

    /// Orients the cut so the lexicographically smallest id is accepted.
    pub fn canonical(self) -> Self {
        let min_acc = self.accepted.first();
        let min_rej = self.rejected.first();
        match (min_acc, min_rej) {
            (Some(a), Some(r)) if r < a => self.flipped(),
            (None, Some(_)) => self.flipped(),
            _ => self,
        }
    }

    /// Orients the cut so every id in `priority` is accepted. Returns `None`
    /// when the cut separates two priority ids.
    pub fn oriented_toward<S: AsRef<str>>(self, priority: &[S]) -> Option<Self> {
        if priority.is_empty() {
            return Some(self.canonical());
        }
        let all_in = |side: &BTreeSet<String>| priority.iter().all(|p| side.contains(p.as_ref()));
        if all_in(&self.accepted) {
            Some(self)
        } else if all_in(&self.rejected) {
            Some(self.flipped())
        } else {
            None
        }
    }

    fn key(&self) -> (&BTreeSet<String>, &BTreeSet<String>) {
        let a = self.accepted.first();
        let r = self.rejected.first();
        let accepted_first = match (a, r) {
            (Some(a), Some(r)) => a < r,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if accepted_first {
            (&self.accepted, &self.rejected)
        } else {
            (&self.rejected, &self.accepted)
        }
    }
}

impl PartialEq for Bipartition {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Bipartition {}

impl Hash for Bipartition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Bipartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bipartition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
        f.pad(&format!("{{{{{}}}, {{{}}}}}", join(&self.accepted), join(&self.rejected)))
    }
}

/// Coherence of `cut`: minus the total weight of edges crossing it.
///
/// Vertices of `graph` absent from both sides of `cut` count as rejected.
pub fn coherence(graph: &CoherenceGraph, cut: &Bipartition) -> Result<f64> {
    for id in cut.accepted.iter().chain(&cut.rejected) {
        if !graph.contains(id) {
            return Err(Error::InvalidPartition(format!("{id:?} is not a vertex of the graph")));
        }
    }
    let accepted: Vec<bool> = graph.ids().map(|id| cut.accepted.contains(id)).collect();
    Ok(coherence_of_sides(graph, &accepted))
}

/// Coherence for a side assignment indexed like `graph.propositions()`.
pub(crate) fn coherence_of_sides(graph: &CoherenceGraph, accepted: &[bool]) -> f64 {
    let crossing: f64 = graph
        .indexed_edges()
        .filter(|&(i, j, _)| accepted[i] != accepted[j])
        .map(|(_, _, w)| w)
        .sum();
    0.0 - crossing
}
