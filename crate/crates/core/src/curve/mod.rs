//! Tropical curves, their rational functions, divisors and chip firing.

pub mod chip;
pub mod graph;
pub mod plfn;

pub use chip::{chip_fire, dist_to_subgraph, Piece, Subgraph};
pub use graph::{CanonicalModel, CurvePoint, Edge, End, Length, MetricGraph, ModelEdge, Pos, Vertex};
pub use plfn::{
    divisor, pl_add, pl_const, pl_max, pl_neg, pl_scale, pl_shift, CurveValue, Divisor, EdgeFn, PLFunction, RawEdge,
};
