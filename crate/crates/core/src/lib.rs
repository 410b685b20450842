//! Cut planning for honeycomb blocks.
//!
//! Node detections from a heatmap are linked into a lattice graph, the cells
//! inside a target outline are rasterised and grown by a clearance distance,
//! and the resulting outline is cut across the lattice walls. Every stage is
//! generic over [`Scalar`] (`f32` or `f64`); `*d` and `*f` aliases fix the
//! precision.

// `!(a < b)` forms are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geometry;
pub mod heatmap;
pub mod json;
pub mod lattice;
pub mod mask;
pub mod pgm;
pub mod planner;
pub mod rng;
mod scalar;
pub mod spatial;
pub mod svg;
pub mod synth;

pub use geometry::{
    perpendicular_angle, point_in_polygon, segment_intersection, GeometryError, PlaneAngle,
    Point2, Polygon, Rect, Segment,
};
pub use heatmap::{detect_nodes, BinaryMask, CentroidOptions, CentroidWeighting, Heatmap, NodePoint};
pub use lattice::{build_graph, Edge, GraphConfig, LatticeGraph, NeighborBand};
pub use planner::{
    plan_cuts, CutPlan, CutPoint, OffsetMode, PipelineConfig, PlanError, PlanInput, PlanReport,
    StartRule,
};
pub use scalar::Scalar;

pub type Point2d = Point2<f64>;
pub type Point2f = Point2<f32>;
pub type Segmentd = Segment<f64>;
pub type Polygond = Polygon<f64>;
pub type Polygonf = Polygon<f32>;
pub type Heatmapd = Heatmap<f64>;
pub type Heatmapf = Heatmap<f32>;
pub type NodePointd = NodePoint<f64>;
pub type LatticeGraphd = LatticeGraph<f64>;
pub type LatticeGraphf = LatticeGraph<f32>;
pub type CutPointd = CutPoint<f64>;
pub type CutPland = CutPlan<f64>;
pub type PipelineConfigd = PipelineConfig<f64>;
pub type PlanReportd = PlanReport<f64>;
