//! Aggregating repeated graph samples.
//!
//! Samples are aligned by vertex-id pair. Every unordered pair takes part
//! in the aggregate, with an absent edge read as weight zero; the
//! elementwise median is the L1-optimal consensus and L1 distance is the
//! graph edit distance under the cost model "changing a weight by d costs
//! |d|, inserting or deleting an edge of weight w costs |w|".

mod diagnostic;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{CoherenceGraph, Proposition};

pub use diagnostic::{convergence_diagnostic, ConvergenceReport, SubsampleDistances, DEFAULT_SUBSAMPLE_CAP};

/// An ordered collection of graphs over one shared vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphEnsemble {
    propositions: Vec<Proposition>,
    samples: Vec<CoherenceGraph>,
}

impl GraphEnsemble {
    /// Uses the first sample's proposition list as the shared vertex order.
    pub fn new(samples: Vec<CoherenceGraph>) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::Ensemble("ensemble needs at least one sample".into()))?;
        let propositions = first.propositions().to_vec();
        GraphEnsemble::with_propositions(propositions, samples)
    }

    pub fn with_propositions(
        propositions: Vec<Proposition>,
        samples: Vec<CoherenceGraph>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Ensemble("ensemble needs at least one sample".into()));
        }
        let ids: BTreeSet<&str> = propositions.iter().map(|p| p.id.as_str()).collect();
        if ids.len() != propositions.len() {
            return Err(Error::Ensemble("duplicate proposition ids".into()));
        }
        for (k, s) in samples.iter().enumerate() {
            if s.ids().collect::<BTreeSet<_>>() != ids {
                return Err(Error::Ensemble(format!(
                    "sample {k} has a different vertex set from the ensemble"
                )));
            }
        }
        Ok(GraphEnsemble {
            propositions,
            samples,
        })
    }

    pub fn propositions(&self) -> &[Proposition] {
        &self.propositions
    }

    pub fn samples(&self) -> &[CoherenceGraph] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The ensemble restricted to the given sample indices.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let samples = indices
            .iter()
            .map(|&i| {
                self.samples
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Ensemble(format!("no sample {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GraphEnsemble::with_propositions(self.propositions.clone(), samples)
    }
}

/// Per-pair weight table: `values[pair][sample]`, pairs over the shared
/// vertex order with `i < j`.
pub(crate) struct PairTable {
    pairs: Vec<(usize, usize)>,
    values: Vec<Vec<f64>>,
}

impl PairTable {
    pub fn new(ensemble: &GraphEnsemble) -> Self {
        let props = ensemble.propositions();
        let n = props.len();
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        let mut values = vec![Vec::with_capacity(ensemble.len()); pairs.len()];
        for sample in ensemble.samples() {
            // Shared index -> this sample's index.
            let local: Vec<usize> = props
                .iter()
                .map(|p| sample.index_of(&p.id).expect("vertex sets checked at construction"))
                .collect();
            for (k, &(i, j)) in pairs.iter().enumerate() {
                values[k].push(sample.weight_at(local[i], local[j]));
            }
        }
        PairTable { pairs, values }
    }

    /// Elementwise median over the samples in `subset`.
    pub fn median(&self, subset: &[usize]) -> Vec<f64> {
        let mut buf = Vec::with_capacity(subset.len());
        self.values
            .iter()
            .map(|vals| {
                buf.clear();
                buf.extend(subset.iter().map(|&s| vals[s]));
                median_in_place(&mut buf)
            })
            .collect()
    }

    pub fn to_graph(&self, propositions: &[Proposition], weights: &[f64]) -> CoherenceGraph {
        let edges: BTreeMap<(usize, usize), f64> = self
            .pairs
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w != 0.0)
            .map(|(&p, &w)| (p, w))
            .collect();
        CoherenceGraph::from_parts(propositions.to_vec(), edges)
    }
}

/// Median with the even-length midpoint convention. `values` is reordered.
pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// L1 distance between two weight vectors over the same pair order.
pub(crate) fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Elementwise median graph; pairs whose median is zero have no edge.
pub fn median_graph(ensemble: &GraphEnsemble) -> CoherenceGraph {
    let table = PairTable::new(ensemble);
    let all: Vec<usize> = (0..ensemble.len()).collect();
    let med = table.median(&all);
    table.to_graph(ensemble.propositions(), &med)
}

/// Sum over unordered vertex pairs of `|w1 - w2|`, absent edges weighing 0.
pub fn l1_distance(g1: &CoherenceGraph, g2: &CoherenceGraph) -> Result<f64> {
    let a: BTreeSet<&str> = g1.ids().collect();
    let b: BTreeSet<&str> = g2.ids().collect();
    if a != b {
        return Err(Error::Ensemble("graphs have different vertex sets".into()));
    }
    let mut total = 0.0;
    for e in g1.edges() {
        total += (e.weight - g2.weight(e.u, e.v)).abs();
    }
    for e in g2.edges() {
        if !g1.has_edge(e.u, e.v) {
            total += e.weight.abs();
        }
    }
    Ok(total)
}
