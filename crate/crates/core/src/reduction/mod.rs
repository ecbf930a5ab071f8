//! Hardness instances: from a planar 2-connected graph with a bar visibility
//! representation to a y-monotone orthogonal polygon whose optimal number of
//! horizontal sliding k-transmitters encodes the minimum vertex cover.

mod gadgets;
mod graph;
mod lemmas;

use thiserror::Error;

use crate::decomposition::DecompositionError;
use crate::geometry::GeometryError;
use crate::hitting::HittingError;

pub use gadgets::{
    build_disconnected, connect, expected_guard_count, Accounting, Connector, Gadget, GadgetKind, LineOfSight,
    ReductionPlan, Shape, Side, Subdivision,
};
pub use graph::{
    min_vertex_cover, subdivide_edge_twice, Bar, BarRepresentation, GraphEdge, GraphInstance, VertexCover,
    VertexId, BRUTE_FORCE_LIMIT, VERTEX_COVER_LIMIT,
};
pub use lemmas::{check_structural_lemmas, LemmaReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph has {vertices} vertices; exact vertex cover is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("no edge ({0}, {1})")]
    NoSuchEdge(VertexId, VertexId),
    #[error("invalid bar visibility representation: {0}")]
    BarRepInvalid(String),
    #[error("k = {0} must be even and positive")]
    OddK(usize),
    #[error("routing failed: {0}")]
    RoutingFailed(String),
    #[error("{lemma} violated: {witness}")]
    LemmaViolated { lemma: String, witness: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Hitting(#[from] HittingError),
}
