//! Sliding k-transmitter guarding of orthogonal polygons.
//!
//! The pipeline discretizes a scene into slices, slice-segments, guard
//! segments and crosses, reduces guarding to a cross-hitting set problem,
//! and solves it either greedily or exactly. The [`reduction`] module builds
//! the vertex-cover hardness instances used to exercise the pipeline.
//!
//! All geometry is exact integer arithmetic. Input coordinates are doubled
//! on the way in, so every polygon feature sits on an even coordinate and
//! odd coordinates are guaranteed to avoid every edge line.

pub mod cli;
pub mod decomposition;
pub mod geometry;
pub mod hitting;
pub mod io;
pub mod random;
pub mod reduction;
pub mod svg;
pub mod visibility;

pub use decomposition::{Decomposition, GuardSegment, Orientation};
pub use geometry::{Axis, Interval, Location, OrthoSegment, Point, Scene};
pub use hitting::{HittingInstance, HittingSolution, Method};
pub use visibility::Transmitter;


