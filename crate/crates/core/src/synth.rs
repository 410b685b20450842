//! Ground-truth honeycomb lattices, node-level defects and detector-style
//! heatmaps, used as fixtures and as test oracles.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lattice::{mean_knn_distance, Edge, LatticeGraph};
use crate::rng::SplitMix64;
use crate::{Heatmap, NodePoint, Point2, Rect, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("lattice needs at least one row and one column, got {rows}x{cols}")]
    EmptyLattice { rows: usize, cols: usize },
    #[error("edge length must be positive and finite")]
    BadEdgeLength,
    #[error("defect magnitudes must be non-negative and dropout in [0, 1)")]
    BadDefectSpec,
    #[error("sigma must be positive")]
    BadSigma,
    #[error("node {0} lies outside the {1}x{2} canvas")]
    NodeOutOfBounds(usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Vertices at top and bottom of each cell; rows offset horizontally.
    #[default]
    PointyTop,
    /// Vertices at left and right; columns offset vertically.
    FlatTop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthLattice<T> {
    /// Node `i` has id `i`.
    pub nodes: Vec<Point2<T>>,
    /// Canonical `(a, b)` pairs with `a < b`, sorted.
    pub adjacency: Vec<(usize, usize)>,
    /// Cell cycles with positive signed area.
    pub faces: Vec<Vec<usize>>,
    pub edge_len: T,
}

/// Cell corners in lattice units (x in half cell widths, y in half edge
/// lengths) around a pointy-top cell, ordered with positive signed area.
const POINTY_CORNERS: [(i64, i64); 6] = [(1, -1), (1, 1), (0, 2), (-1, 1), (-1, -1), (0, -2)];

/// Regular honeycomb of `rows x cols` cells with its bounding box starting at
/// `origin`. Ids follow `(y, x)` reading order.
pub fn generate_lattice<T: Scalar>(
    rows: usize,
    cols: usize,
    edge_len: T,
    origin: Point2<T>,
    orientation: Orientation,
) -> Result<GroundTruthLattice<T>, SynthError> {
    if rows == 0 || cols == 0 {
        return Err(SynthError::EmptyLattice { rows, cols });
    }
    if !(edge_len > T::zero() && edge_len.is_finite()) {
        return Err(SynthError::BadEdgeLength);
    }
    let (prow, pcol) = match orientation {
        Orientation::PointyTop => (rows, cols),
        Orientation::FlatTop => (cols, rows),
    };
    // integer keys keep shared corners exactly equal across cells
    let mut cells: Vec<Vec<(i64, i64)>> = Vec::with_capacity(rows * cols);
    for r in 0..prow as i64 {
        for c in 0..pcol as i64 {
            let (cx, cy) = (2 * c + (r & 1), 3 * r);
            let mut corners: Vec<(i64, i64)> = POINTY_CORNERS
                .iter()
                .map(|&(dx, dy)| (cx + dx + 1, cy + dy + 2))
                .collect();
            if orientation == Orientation::FlatTop {
                // transpose, then restore positive orientation
                corners = corners.into_iter().map(|(x, y)| (y, x)).rev().collect();
            }
            cells.push(corners);
        }
    }
    // (row key, col key) -> id, in reading order
    let keys: BTreeSet<(i64, i64)> = cells.iter().flatten().map(|&(x, y)| (y, x)).collect();
    let ids: BTreeMap<(i64, i64), usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let half_w = edge_len * T::lit(3f64.sqrt()) / T::lit(2.0);
    let half_l = edge_len / T::lit(2.0);
    let (ux, uy) = match orientation {
        Orientation::PointyTop => (half_w, half_l),
        Orientation::FlatTop => (half_l, half_w),
    };
    let to_t = |v: i64| T::from_i64(v).expect("lattice key");
    let nodes = keys
        .iter()
        .map(|&(y, x)| Point2::new(origin.x + to_t(x) * ux, origin.y + to_t(y) * uy))
        .collect();
    let faces: Vec<Vec<usize>> = cells
        .iter()
        .map(|corners| corners.iter().map(|&(x, y)| ids[&(y, x)]).collect())
        .collect();
    Ok(GroundTruthLattice {
        nodes,
        adjacency: adjacency_of(&faces),
        faces,
        edge_len,
    })
}

fn adjacency_of(faces: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut set = BTreeSet::new();
    for f in faces {
        for i in 0..f.len() {
            let (a, b) = (f[i], f[(i + 1) % f.len()]);
            set.insert((a.min(b), a.max(b)));
        }
    }
    set.into_iter().collect()
}

/// Node-level defect model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DefectSpec<T> {
    /// Isotropic Gaussian displacement of every node (profile deformation).
    pub jitter_sigma: T,
    /// Number of nodes receiving an extra large displacement (dents).
    pub dent_count: usize,
    pub dent_magnitude: T,
    /// Per-node probability of a missed detection.
    pub dropout_prob: T,
}

impl<T: Scalar> DefectSpec<T> {
    fn validate(&self) -> Result<(), SynthError> {
        let ok = self.jitter_sigma >= T::zero()
            && self.dent_magnitude >= T::zero()
            && self.dropout_prob >= T::zero()
            && self.dropout_prob < T::one();
        if ok {
            Ok(())
        } else {
            Err(SynthError::BadDefectSpec)
        }
    }
}

/// Applies jitter, then dents, then dropout, drawing from one SplitMix64
/// stream seeded with `seed`. Surviving nodes keep their relative order and
/// are renumbered densely; edges and faces touching removed nodes are dropped.
pub fn apply_defects<T: Scalar>(
    lat: &GroundTruthLattice<T>,
    spec: &DefectSpec<T>,
    seed: u64,
) -> Result<GroundTruthLattice<T>, SynthError> {
    spec.validate()?;
    let mut rng = SplitMix64::new(seed);
    let n = lat.nodes.len();
    let mut nodes = lat.nodes.clone();
    for p in nodes.iter_mut() {
        let dx = T::lit(rng.standard_normal()) * spec.jitter_sigma;
        let dy = T::lit(rng.standard_normal()) * spec.jitter_sigma;
        *p = Point2::new(p.x + dx, p.y + dy);
    }
    // partial Fisher-Yates picks distinct dent targets
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..spec.dent_count.min(n) {
        let j = i + rng.below(n - i);
        order.swap(i, j);
        let theta = T::lit(rng.next_f64() * std::f64::consts::TAU);
        let v = order[i];
        nodes[v] = Point2::new(
            nodes[v].x + spec.dent_magnitude * theta.cos(),
            nodes[v].y + spec.dent_magnitude * theta.sin(),
        );
    }
    let keep: Vec<bool> = (0..n)
        .map(|_| !(T::lit(rng.next_f64()) < spec.dropout_prob))
        .collect();
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for (i, k) in keep.iter().enumerate() {
        if *k {
            remap[i] = next;
            next += 1;
        }
    }
    let kept_nodes = nodes
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(p, _)| *p)
        .collect();
    let adjacency = lat
        .adjacency
        .iter()
        .filter(|(a, b)| keep[*a] && keep[*b])
        .map(|&(a, b)| (remap[a], remap[b]))
        .collect();
    let faces = lat
        .faces
        .iter()
        .filter(|f| f.iter().all(|&v| keep[v]))
        .map(|f| f.iter().map(|&v| remap[v]).collect())
        .collect();
    Ok(GroundTruthLattice {
        nodes: kept_nodes,
        adjacency,
        faces,
        edge_len: lat.edge_len,
    })
}

impl<T: Scalar> GroundTruthLattice<T> {
    pub fn bbox(&self) -> Option<Rect<T>> {
        Rect::bounding(self.nodes.iter().copied())
    }

    pub fn node_points(&self) -> Vec<NodePoint<T>> {
        crate::lattice::nodes_from_points(&self.nodes)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(a, b) in &self.adjacency {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// The lattice as a graph with its own adjacency. The mean kNN distance
    /// is left at zero when there are fewer than 4 nodes.
    pub fn to_graph(&self, k: usize) -> LatticeGraph<T> {
        let nodes = self.node_points();
        let edges: Vec<Edge<T>> = self
            .adjacency
            .iter()
            .map(|&(a, b)| Edge {
                a,
                b,
                length: self.nodes[a].distance(self.nodes[b]),
            })
            .collect();
        let mean_edge_length = if edges.is_empty() {
            T::zero()
        } else {
            edges.iter().fold(T::zero(), |s, e| s + e.length) / T::from_index(edges.len())
        };
        LatticeGraph {
            mean_knn_distance: mean_knn_distance(&nodes, k).unwrap_or(T::zero()),
            nodes,
            edges,
            mean_edge_length,
        }
    }

    /// Canvas size that holds every node with `margin` pixels to spare.
    pub fn canvas_size(&self, margin: T) -> (usize, usize) {
        let max = self
            .bbox()
            .map(|r| r.max)
            .unwrap_or_else(|| Point2::new(T::zero(), T::zero()));
        let dim = |v: T| (v + margin).ceil().to_usize().unwrap_or(0) + 1;
        (dim(max.x), dim(max.y))
    }
}

/// Gaussian blob per node, summed and clamped to `[0, 1]`, sampled at integer
/// pixel positions. Contributions are evaluated within `8.5 sigma` of each
/// node, beyond which they fall under `1e-15`.
pub fn render_heatmap<T: Scalar>(
    lat: &GroundTruthLattice<T>,
    sigma: T,
    width: usize,
    height: usize,
) -> Result<Heatmap<T>, SynthError> {
    if !(sigma > T::zero() && sigma.is_finite()) {
        return Err(SynthError::BadSigma);
    }
    let (wf, hf) = (T::from_index(width), T::from_index(height));
    for (i, p) in lat.nodes.iter().enumerate() {
        if !(p.x >= T::zero() && p.y >= T::zero() && p.x <= wf - T::one() && p.y <= hf - T::one()) {
            return Err(SynthError::NodeOutOfBounds(i, width, height));
        }
    }
    let mut acc = vec![T::zero(); width * height];
    let reach = sigma * T::lit(8.5);
    let inv = T::one() / (T::lit(2.0) * sigma * sigma);
    for p in &lat.nodes {
        let c0 = (p.x - reach).ceil().max(T::zero()).to_usize().unwrap_or(0);
        let c1 = (p.x + reach).floor().min(wf - T::one()).to_usize().unwrap_or(0);
        let r0 = (p.y - reach).ceil().max(T::zero()).to_usize().unwrap_or(0);
        let r1 = (p.y + reach).floor().min(hf - T::one()).to_usize().unwrap_or(0);
        for r in r0..=r1 {
            let dy = T::from_index(r) - p.y;
            for c in c0..=c1 {
                let dx = T::from_index(c) - p.x;
                let idx = r * width + c;
                acc[idx] = acc[idx] + (-(dx * dx + dy * dy) * inv).exp();
            }
        }
    }
    for v in acc.iter_mut() {
        *v = v.min(T::one());
    }
    Ok(Heatmap::new(width, height, acc).expect("clamped values on a non-empty canvas"))
}
