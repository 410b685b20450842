//! Honeycomb edge reconstruction from node points.
//!
//! Two nodes are joined when their distance falls inside a band relative to
//! the mean distance from every node to its `k` nearest neighbours.

use thiserror::Error;

use crate::spatial::GridIndex;
use crate::{NodePoint, Point2, Rect, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("need at least {needed} nodes for k = {k} nearest neighbours, got {got}")]
    TooFewNodes { needed: usize, got: usize, k: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("neighbour band requires 0 < lo < hi, got [{lo}, {hi}]")]
    InvalidBand { lo: f64, hi: f64 },
    #[error("node ids must be 0..n in order; position {index} has id {id}")]
    BadNodeIds { index: usize, id: usize },
}

/// Undirected lattice wall between two nodes, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub a: usize,
    pub b: usize,
    pub length: T,
}

/// Accepted neighbour distances as multiples of the mean kNN distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborBand<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> NeighborBand<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, LatticeError> {
        if lo > T::zero() && lo < hi && hi.is_finite() {
            Ok(Self { lo, hi })
        } else {
            Err(LatticeError::InvalidBand {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            })
        }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    /// Closed-interval membership of `dist` in `[lo * mean, hi * mean]`,
    /// with an `eps_geom * mean` allowance at both ends.
    pub fn accepts(&self, dist: T, mean: T) -> bool {
        let slack = T::eps_geom() * mean;
        dist >= self.lo * mean - slack && dist <= self.hi * mean + slack
    }
}

impl<T: Scalar> Default for NeighborBand<T> {
    fn default() -> Self {
        Self {
            lo: T::lit(0.5),
            hi: T::lit(1.3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphConfig<T> {
    pub k: usize,
    pub band: NeighborBand<T>,
}

impl<T: Scalar> Default for GraphConfig<T> {
    fn default() -> Self {
        Self {
            k: 3,
            band: NeighborBand::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGraph<T> {
    pub nodes: Vec<NodePoint<T>>,
    pub edges: Vec<Edge<T>>,
    pub mean_knn_distance: T,
    /// Zero when there are no edges.
    pub mean_edge_length: T,
}

impl<T: Scalar> LatticeGraph<T> {
    pub fn position(&self, id: usize) -> Point2<T> {
        self.nodes[id].position
    }

    pub fn positions(&self) -> Vec<Point2<T>> {
        self.nodes.iter().map(|n| n.position).collect()
    }

    pub fn bbox(&self) -> Option<Rect<T>> {
        Rect::bounding(self.nodes.iter().map(|n| n.position))
    }

    /// Neighbour lists indexed by node id, ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        let (a, b) = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.a, e.b).cmp(&(a, b)))
            .ok()
    }
}

fn check_ids<T>(nodes: &[NodePoint<T>]) -> Result<(), LatticeError> {
    match nodes.iter().enumerate().find(|(i, n)| n.id != *i) {
        Some((index, n)) => Err(LatticeError::BadNodeIds { index, id: n.id }),
        None => Ok(()),
    }
}

/// Mean over all nodes of the mean distance to their `k` nearest other nodes.
pub fn mean_knn_distance<T: Scalar>(nodes: &[NodePoint<T>], k: usize) -> Result<T, LatticeError> {
    if k == 0 {
        return Err(LatticeError::ZeroK);
    }
    if nodes.len() < k + 1 {
        return Err(LatticeError::TooFewNodes {
            needed: k + 1,
            got: nodes.len(),
            k,
        });
    }
    let pts: Vec<Point2<T>> = nodes.iter().map(|n| n.position).collect();
    let index = GridIndex::for_knn(&pts);
    let kf = T::from_index(k);
    let total = (0..pts.len()).fold(T::zero(), |acc, i| {
        let sum = index
            .k_nearest(i, k)
            .iter()
            .fold(T::zero(), |s, (d, _)| s + *d);
        acc + sum / kf
    });
    Ok(total / T::from_index(pts.len()))
}

/// Every unordered pair whose distance lies in the band, sorted by `(a, b)`.
pub fn reconstruct_edges<T: Scalar>(
    nodes: &[NodePoint<T>],
    mean_dist: T,
    band: &NeighborBand<T>,
) -> Vec<Edge<T>> {
    if !(mean_dist > T::zero()) || nodes.len() < 2 {
        return Vec::new();
    }
    let pts: Vec<Point2<T>> = nodes.iter().map(|n| n.position).collect();
    let reach = band.hi * mean_dist * (T::one() + T::eps_geom());
    let index = GridIndex::new(&pts, reach);
    let mut edges = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for j in index.within(*p, reach) {
            if j <= i {
                continue;
            }
            let d = p.distance(pts[j]);
            if d > T::zero() && band.accepts(d, mean_dist) {
                edges.push(Edge {
                    a: nodes[i].id.min(nodes[j].id),
                    b: nodes[i].id.max(nodes[j].id),
                    length: d,
                });
            }
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    edges
}

/// Composes the mean-distance and band steps and caches both statistics.
pub fn build_graph<T: Scalar>(
    nodes: Vec<NodePoint<T>>,
    config: &GraphConfig<T>,
) -> Result<LatticeGraph<T>, LatticeError> {
    check_ids(&nodes)?;
    let needed = (config.k + 1).max(4);
    if nodes.len() < needed {
        return Err(LatticeError::TooFewNodes {
            needed,
            got: nodes.len(),
            k: config.k,
        });
    }
    let mean = mean_knn_distance(&nodes, config.k)?;
    let edges = reconstruct_edges(&nodes, mean, &config.band);
    let mean_edge_length = if edges.is_empty() {
        T::zero()
    } else {
        edges.iter().fold(T::zero(), |s, e| s + e.length) / T::from_index(edges.len())
    };
    Ok(LatticeGraph {
        nodes,
        edges,
        mean_knn_distance: mean,
        mean_edge_length,
    })
}

/// Wraps raw positions as nodes with ids in slice order and unit score.
pub fn nodes_from_points<T: Scalar>(points: &[Point2<T>]) -> Vec<NodePoint<T>> {
    points
        .iter()
        .enumerate()
        .map(|(id, &position)| NodePoint {
            id,
            position,
            score: T::one(),
        })
        .collect()
}
