//! End-to-end cut planning: lattice cells inside the target are dilated by
//! the clearance distance, the outline of that region is intersected with
//! the lattice walls, and the resulting cuts are clamped to the allowed band
//! and ordered into a short blade tour.

mod constraint;
mod intersect;
mod order;

pub use constraint::{enforce_offset_constraint, CutPoint, OffsetMode, Rejection};
pub use intersect::{intersect_edges_with_contour, CutCandidate, Intersections, MultipleCrossings};
pub use order::{order_cut_points, path_length, StartRule, Tour};

use std::fmt;

use thiserror::Error;

use crate::heatmap::{detect_nodes, CentroidOptions, CentroidWeighting};
use crate::lattice::{build_graph, GraphConfig, LatticeError, LatticeGraph, NeighborBand};
use crate::mask::{
    dilate, extract_faces, kept_faces, rasterize_faces, trace_contour, FaceSet, MaskError,
    RasterFrame,
};
use crate::{BinaryMask, Heatmap, NodePoint, Polygon, Rect, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("tau out of range: {0} not in [0, 1)")]
    Tau(f64),
    #[error("offset coefficient out of range: {0} not in (0, 0.5)")]
    OffsetCoeff(f64),
    #[error("supersample must be at least 1")]
    Supersample,
    #[error("k must be at least 1")]
    K,
}

/// Every tunable of the pipeline. Defaults reproduce the reference
/// procedure: threshold 0.3, 3 neighbours, band [0.5, 1.3], clearance 0.4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig<T> {
    pub tau: T,
    pub k: usize,
    pub band: NeighborBand<T>,
    pub offset_coeff: T,
    pub supersample: usize,
    pub min_blob_area: usize,
    pub rng_seed: u64,
    pub offset_mode: OffsetMode,
    pub weighting: CentroidWeighting,
    pub start: StartRule<T>,
}

impl<T: Scalar> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self {
            tau: T::lit(0.3),
            k: 3,
            band: NeighborBand::default(),
            offset_coeff: T::lit(0.4),
            supersample: 2,
            min_blob_area: 2,
            rng_seed: 0,
            offset_mode: OffsetMode::Clamp,
            weighting: CentroidWeighting::Unweighted,
            start: StartRule::MinYX,
        }
    }
}

impl<T: Scalar> PipelineConfig<T> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tau >= T::zero() && self.tau < T::one()) {
            return Err(ConfigError::Tau(self.tau.as_f64()));
        }
        if !(self.offset_coeff > T::zero() && self.offset_coeff < T::lit(0.5)) {
            return Err(ConfigError::OffsetCoeff(self.offset_coeff.as_f64()));
        }
        if self.supersample == 0 {
            return Err(ConfigError::Supersample);
        }
        if self.k == 0 {
            return Err(ConfigError::K);
        }
        Ok(())
    }

    pub fn graph_config(&self) -> GraphConfig<T> {
        GraphConfig {
            k: self.k,
            band: self.band,
        }
    }

    pub fn centroid_options(&self) -> CentroidOptions {
        CentroidOptions {
            min_blob_area: self.min_blob_area,
            weighting: self.weighting,
        }
    }
}

/// Ordered cuts plus the configuration that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPlan<T> {
    pub cuts: Vec<CutPoint<T>>,
    pub travel_length: T,
    pub config: PipelineConfig<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlanDiagnostics {
    pub nodes: usize,
    pub edges: usize,
    pub faces: usize,
    pub faces_kept: usize,
    pub candidates: usize,
    pub clamped_count: usize,
    pub rejected_count: usize,
    pub multi_crossing_edges: usize,
}

/// The plan together with every intermediate product.
#[derive(Debug, Clone)]
pub struct PlanReport<T> {
    pub plan: CutPlan<T>,
    pub diagnostics: PlanDiagnostics,
    pub graph: LatticeGraph<T>,
    pub faces: FaceSet,
    pub kept: Vec<usize>,
    pub frame: RasterFrame<T>,
    pub structure: BinaryMask,
    pub dilated: BinaryMask,
    pub contour: Polygon<T>,
    pub rejections: Vec<Rejection<T>>,
    pub multiple_crossings: Vec<MultipleCrossings>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Detect,
    Graph,
    StructureMask,
    Dilate,
    TraceContour,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Detect => "detect",
            Stage::Graph => "graph",
            Stage::StructureMask => "structure_mask",
            Stage::Dilate => "dilate",
            Stage::TraceContour => "trace_contour",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StageError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Mask(#[from] MaskError),
    #[error("no nodes detected")]
    NoNodes,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{stage} stage failed: {source}")]
pub struct PlanError {
    pub stage: Stage,
    pub source: StageError,
}

fn at<E: Into<StageError>>(stage: Stage) -> impl FnOnce(E) -> PlanError {
    move |e| PlanError {
        stage,
        source: e.into(),
    }
}

pub enum PlanInput<'a, T> {
    Nodes(Vec<NodePoint<T>>),
    Heatmap(&'a Heatmap<T>),
}

/// Extra image pixels kept around the dilated region so the trace never
/// touches the frame edge.
const FRAME_PAD_PX: f64 = 2.0;

pub fn plan_cuts<T: Scalar>(
    input: PlanInput<'_, T>,
    target: &Polygon<T>,
    config: &PipelineConfig<T>,
) -> Result<PlanReport<T>, PlanError> {
    config.validate().map_err(at(Stage::Config))?;
    let nodes = match input {
        PlanInput::Nodes(n) => n,
        PlanInput::Heatmap(hm) => {
            let n = detect_nodes(hm, config.tau, &config.centroid_options());
            if n.is_empty() {
                return Err(at(Stage::Detect)(StageError::NoNodes));
            }
            n
        }
    };
    let graph = build_graph(nodes, &config.graph_config()).map_err(at(Stage::Graph))?;

    let faces = extract_faces(&graph);
    let kept = kept_faces(&graph, &faces, target);
    if kept.is_empty() {
        return Err(at(Stage::StructureMask)(MaskError::TargetTooSmall));
    }
    let radius = graph.mean_edge_length * config.offset_coeff;
    let bounds = Rect::bounding(
        kept.iter()
            .flat_map(|&f| faces.faces[f].iter().map(|&v| graph.position(v))),
    )
    .expect("kept faces have vertices");
    let frame = RasterFrame::around(&bounds, radius + T::lit(FRAME_PAD_PX), config.supersample)
        .map_err(at(Stage::StructureMask))?;
    let structure =
        rasterize_faces(&graph, &faces, &kept, &frame).map_err(at(Stage::StructureMask))?;

    let radius_px = radius * T::from_index(config.supersample);
    let dilated = dilate(&structure, radius_px).map_err(at(Stage::Dilate))?;
    let contour = trace_contour(&dilated, &frame).map_err(at(Stage::TraceContour))?;

    let crossings = intersect_edges_with_contour(&graph, &contour);
    let mut accepted = Vec::with_capacity(crossings.candidates.len());
    let mut rejections = Vec::new();
    for c in &crossings.candidates {
        match enforce_offset_constraint(c, &graph, config.offset_coeff, config.offset_mode) {
            Ok(cp) => accepted.push(cp),
            Err(r) => rejections.push(r),
        }
    }
    let tour = order_cut_points(accepted, config.start);

    let diagnostics = PlanDiagnostics {
        nodes: graph.nodes.len(),
        edges: graph.edges.len(),
        faces: faces.len(),
        faces_kept: kept.len(),
        candidates: crossings.candidates.len(),
        clamped_count: tour.cuts.iter().filter(|c| c.clamped).count(),
        rejected_count: rejections.len(),
        multi_crossing_edges: crossings.multiple.len(),
    };
    Ok(PlanReport {
        plan: CutPlan {
            cuts: tour.cuts,
            travel_length: tour.travel_length,
            config: *config,
        },
        diagnostics,
        graph,
        faces,
        kept,
        frame,
        structure,
        dilated,
        contour,
        rejections,
        multiple_crossings: crossings.multiple,
    })
}
