//! JSON documents exchanged between pipeline stages.
//!
//! Field order is fixed by the struct definitions; reals are written with
//! exactly six decimals.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::planner::{OffsetMode, PlanReport};
use crate::synth::GroundTruthLattice;
use crate::{LatticeGraph, NodePoint, Point2, Polygon, Scalar};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid polygon: {0}")]
    Polygon(#[from] GeometryError),
    #[error("node ids must be exactly 0..{len}; missing {missing}")]
    NodeIds { len: usize, missing: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

/// A real written as a fixed six-decimal JSON number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed6(pub f64);

impl Fixed6 {
    pub fn of<T: Scalar>(v: T) -> Self {
        Self(v.as_f64())
    }
}

impl Serialize for Fixed6 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        // avoid "-0.000000"
        let v = if self.0 == 0.0 { 0.0 } else { self.0 };
        let text = format!("{v:.6}");
        let text = if text.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            "0.000000".to_string()
        } else {
            text
        };
        RawValue::from_string(text)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fixed6 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Fixed6)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub x: Fixed6,
    pub y: Fixed6,
    #[serde(default = "unit_score")]
    pub score: Fixed6,
}

fn unit_score() -> Fixed6 {
    Fixed6(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRef {
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeRef>,
    pub mean_knn_distance: Fixed6,
    pub mean_edge_length: Fixed6,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodesDoc {
    pub nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetDoc {
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub tau: Fixed6,
    pub k: usize,
    pub band: [Fixed6; 2],
    pub offset_coeff: Fixed6,
    pub supersample: usize,
    pub min_blob_area: usize,
    pub rng_seed: u64,
    pub offset_mode: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutDoc {
    pub edge: EdgeRef,
    pub x: Fixed6,
    pub y: Fixed6,
    pub t: Fixed6,
    pub angle_deg: Fixed6,
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsDoc {
    pub nodes: usize,
    pub edges: usize,
    pub faces_kept: usize,
    pub candidates: usize,
    pub clamped_count: usize,
    #[serde(default)]
    pub rejected_count: usize,
    #[serde(default)]
    pub multi_crossing_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub config: ConfigDoc,
    pub cuts: Vec<CutDoc>,
    pub travel_length_px: Fixed6,
    pub diagnostics: DiagnosticsDoc,
}

fn node_doc<T: Scalar>(n: &NodePoint<T>) -> NodeDoc {
    NodeDoc {
        id: n.id,
        x: Fixed6::of(n.position.x),
        y: Fixed6::of(n.position.y),
        score: Fixed6::of(n.score),
    }
}

pub fn graph_doc<T: Scalar>(g: &LatticeGraph<T>) -> GraphDoc {
    GraphDoc {
        nodes: g.nodes.iter().map(node_doc).collect(),
        edges: g.edges.iter().map(|e| EdgeRef { a: e.a, b: e.b }).collect(),
        mean_knn_distance: Fixed6::of(g.mean_knn_distance),
        mean_edge_length: Fixed6::of(g.mean_edge_length),
        faces: None,
    }
}

/// Ground truth in the graph schema plus its `faces`.
pub fn lattice_doc<T: Scalar>(lat: &GroundTruthLattice<T>, k: usize) -> GraphDoc {
    GraphDoc {
        faces: Some(lat.faces.clone()),
        ..graph_doc(&lat.to_graph(k))
    }
}

pub fn nodes_doc<T: Scalar>(nodes: &[NodePoint<T>]) -> NodesDoc {
    NodesDoc {
        nodes: nodes.iter().map(node_doc).collect(),
    }
}

pub fn plan_doc<T: Scalar>(report: &PlanReport<T>) -> PlanDoc {
    let plan = &report.plan;
    let c = &plan.config;
    let d = &report.diagnostics;
    PlanDoc {
        config: ConfigDoc {
            tau: Fixed6::of(c.tau),
            k: c.k,
            band: [Fixed6::of(c.band.lo()), Fixed6::of(c.band.hi())],
            offset_coeff: Fixed6::of(c.offset_coeff),
            supersample: c.supersample,
            min_blob_area: c.min_blob_area,
            rng_seed: c.rng_seed,
            offset_mode: match c.offset_mode {
                OffsetMode::Clamp => "clamp".into(),
                OffsetMode::Reject => "reject".into(),
            },
        },
        cuts: plan
            .cuts
            .iter()
            .map(|cut| {
                let e = report.graph.edges[cut.edge];
                CutDoc {
                    edge: EdgeRef { a: e.a, b: e.b },
                    x: Fixed6::of(cut.point.x),
                    y: Fixed6::of(cut.point.y),
                    t: Fixed6::of(cut.t),
                    angle_deg: Fixed6::of(cut.angle.degrees()),
                    clamped: cut.clamped,
                }
            })
            .collect(),
        travel_length_px: Fixed6::of(plan.travel_length),
        diagnostics: DiagnosticsDoc {
            nodes: d.nodes,
            edges: d.edges,
            faces_kept: d.faces_kept,
            candidates: d.candidates,
            clamped_count: d.clamped_count,
            rejected_count: d.rejected_count,
            multi_crossing_edges: d.multi_crossing_edges,
        },
    }
}

pub fn to_json<S: Serialize>(doc: &S) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

/// Nodes from any document with a `nodes` array (nodes, graph or lattice
/// JSON). Ids must be a permutation of `0..n`; output is in id order.
pub fn parse_nodes<T: Scalar>(text: &str) -> Result<Vec<NodePoint<T>>, JsonError> {
    let doc: NodesDoc = serde_json::from_str(text)?;
    let n = doc.nodes.len();
    let mut slots: Vec<Option<NodePoint<T>>> = vec![None; n];
    for nd in doc.nodes {
        if nd.id >= n {
            return Err(JsonError::NodeIds { len: n, missing: (0..n).find(|i| slots[*i].is_none()).unwrap_or(0) });
        }
        if !(nd.x.0.is_finite() && nd.y.0.is_finite() && nd.score.0.is_finite()) {
            return Err(JsonError::NonFinite("nodes"));
        }
        slots[nd.id] = Some(NodePoint {
            id: nd.id,
            position: Point2::new(T::lit(nd.x.0), T::lit(nd.y.0)),
            score: T::lit(nd.score.0),
        });
    }
    slots
        .iter()
        .enumerate()
        .map(|(i, s)| s.ok_or(JsonError::NodeIds { len: n, missing: i }))
        .collect()
}

pub fn parse_graph(text: &str) -> Result<GraphDoc, JsonError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_target<T: Scalar>(text: &str) -> Result<Polygon<T>, JsonError> {
    let doc: TargetDoc = serde_json::from_str(text)?;
    Ok(Polygon::new(
        doc.vertices
            .iter()
            .map(|[x, y]| Point2::new(T::lit(*x), T::lit(*y)))
            .collect(),
    )?)
}

pub fn target_doc<T: Scalar>(poly: &Polygon<T>) -> TargetDoc {
    TargetDoc {
        vertices: poly
            .vertices()
            .iter()
            .map(|p| [p.x.as_f64(), p.y.as_f64()])
            .collect(),
    }
}

pub fn parse_plan(text: &str) -> Result<PlanDoc, JsonError> {
    Ok(serde_json::from_str(text)?)
}
