//! Bayesian analysis of reversible Markov chains on finite graphs.
//!
//! A reversible Markov chain on a finite graph is parameterized by positive
//! edge weights summing to one: from vertex `v` the chain moves along an
//! incident edge with probability proportional to the edge's weight. This
//! crate implements the conjugate family for that model:
//!
//! - [`graph`]: finite undirected graphs with loops, spanning trees,
//!   oriented cycle bases, and the loop-elimination transform;
//! - [`path`]: admissible paths, the transition-count sufficient statistic,
//!   and the path likelihood;
//! - [`prior`]: the conjugate prior density over edge weights with its
//!   closed-form normalizing constant, plus specialized densities for
//!   lines, trees with loops, triangles with loops, and complete graphs;
//! - [`errw`]: edge-reinforced random walk — the urn scheme whose path law
//!   is exactly the mixture of reversible chains under the prior — for
//!   posterior simulation;
//! - [`inference`]: posterior updates, closed-form marginal likelihoods,
//!   Bayes factors, and reversibility diagnostics;
//! - [`io`]: sequence, count-table, graph-spec, and weight-file formats,
//!   and decimal formatting for probabilities far below `f64` range.
//!
//! Numerics are generic over the scalar type via [`num::Scalar`] (`f32` or
//! `f64`); the crate root re-exports `f64` aliases for the common types.

pub mod errw;
pub mod graph;
pub mod inference;
pub mod io;
pub mod logval;
pub mod num;
pub mod path;
pub mod prior;

pub use graph::{
    Edge, EdgeId, Graph, GraphError, LoopTransform, OrientedCycle, SpanningTree, VertexId,
};
pub use path::{Path, PathError, TransitionCounts};

/// `f64` alias for [`logval::LogValue`].
pub type LogValue = logval::LogValue<f64>;
/// `f64` alias for [`path::SimplexPoint`].
pub type SimplexPoint = path::SimplexPoint<f64>;
/// `f64` alias for [`prior::PriorParams`].
pub type PriorParams = prior::PriorParams<f64>;
/// `f64` alias for [`prior::CycleMatrix`].
pub type CycleMatrix = prior::CycleMatrix<f64>;
/// `f64` alias for [`errw::ErrwState`].
pub type ErrwState = errw::ErrwState<f64>;
/// `f64` alias for [`inference::ModelSpec`].
pub type ModelSpec = inference::ModelSpec<f64>;
/// `f64` alias for [`inference::BayesTestReport`].
pub type BayesTestReport = inference::BayesTestReport<f64>;
/// `f64` alias for [`inference::DiagnosticsReport`].
pub type DiagnosticsReport = inference::DiagnosticsReport<f64>;
