use std::cmp::Ordering;

use crate::geometry::signed_area;
use crate::{LatticeGraph, Point2, Polygon, Scalar};

const MIN_FACE_LEN: usize = 4;
const MAX_FACE_LEN: usize = 8;

/// Bounded lattice cells as node-id cycles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaceSet {
    /// Each cycle starts at its smallest id; cycles sorted lexicographically.
    pub faces: Vec<Vec<usize>>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// Enumerates bounded faces by half-edge traversal.
///
/// Outgoing half-edges at each node are sorted by direction angle; from a
/// half-edge `u -> v` the walk continues along the neighbour of `v` that
/// precedes `u` in that order (the sharpest clockwise turn). Bounded faces
/// come out with positive signed area; the outer walk and tree-like walks do
/// not. Cycles with repeated vertices or a length outside `[4, 8]` are dropped.
pub fn extract_faces<T: Scalar>(graph: &LatticeGraph<T>) -> FaceSet {
    let n = graph.nodes.len();
    let mut rings: Vec<Vec<usize>> = graph.adjacency();
    for (u, ring) in rings.iter_mut().enumerate() {
        let pu = graph.position(u);
        let angle = |v: usize| {
            let d = graph.position(v) - pu;
            d.y.atan2(d.x)
        };
        ring.sort_by(|&a, &b| {
            angle(a)
                .partial_cmp(&angle(b))
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
    }
    let mut offsets = vec![0usize; n + 1];
    for u in 0..n {
        offsets[u + 1] = offsets[u] + rings[u].len();
    }
    let half_edge = |u: usize, v: usize| -> usize {
        let pos = rings[u].iter().position(|&w| w == v).expect("edge present in both rings");
        offsets[u] + pos
    };
    let mut used = vec![false; offsets[n]];
    let mut faces = Vec::new();
    for u0 in 0..n {
        for &v0 in &rings[u0] {
            let start = half_edge(u0, v0);
            if used[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut u, mut v) = (u0, v0);
            loop {
                used[half_edge(u, v)] = true;
                cycle.push(u);
                let ring = &rings[v];
                let back = ring.iter().position(|&w| w == u).expect("symmetric adjacency");
                let w = ring[(back + ring.len() - 1) % ring.len()];
                u = v;
                v = w;
                if half_edge(u, v) == start {
                    break;
                }
            }
            if let Some(face) = accept_cycle(graph, cycle) {
                faces.push(face);
            }
        }
    }
    faces.sort();
    FaceSet { faces }
}

fn accept_cycle<T: Scalar>(graph: &LatticeGraph<T>, mut cycle: Vec<usize>) -> Option<Vec<usize>> {
    if !(MIN_FACE_LEN..=MAX_FACE_LEN).contains(&cycle.len()) {
        return None;
    }
    let mut sorted = cycle.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cycle.len() {
        return None;
    }
    let pts: Vec<Point2<T>> = cycle.iter().map(|&v| graph.position(v)).collect();
    if !(signed_area(&pts) > T::zero()) {
        return None;
    }
    let min_at = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(min_at);
    Some(cycle)
}

/// Geometric polygon of a face; `None` if the node positions do not form a
/// simple polygon.
pub fn face_polygon<T: Scalar>(graph: &LatticeGraph<T>, face: &[usize]) -> Option<Polygon<T>> {
    Polygon::new(face.iter().map(|&v| graph.position(v)).collect()).ok()
}
