//! Coherence-driven inference over arguments.
//!
//! Propositions become vertices of a signed, weighted [`CoherenceGraph`];
//! inference picks the bipartition into accepted and rejected propositions
//! that maximizes [`coherence`], a weighted MAX-CUT. Around that core the
//! crate offers:
//!
//! - [`solver`]: exact enumeration with full tie sets and priority-based
//!   orientation, a multi-start local-search heuristic, and Gibbs-weighted
//!   soft acceptance.
//! - [`ensemble`]: elementwise-median aggregation of repeated graph samples,
//!   L1 (graph edit) distance, and a subsampling convergence diagnostic.
//! - [`llm`]: the graph-compilation prompt, a lenient tuple-list parser,
//!   OpenAI-compatible and record/replay providers, and ensemble sampling.
//! - [`cli`]: the `cdi` command-line workflow.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod llm;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{
    coherence, quantize, rating_to_weight, to_dot, Bipartition, CoherenceGraph, Proposition,
    WeightScale,
};
