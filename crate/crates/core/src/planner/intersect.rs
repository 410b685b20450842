use crate::geometry::segment_intersection_params;
use crate::{LatticeGraph, Point2, Polygon, Rect, Scalar, Segment};

/// Raw crossing of a lattice edge with the cut contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutCandidate<T> {
    /// Index into `graph.edges`.
    pub edge: usize,
    pub point: Point2<T>,
    /// Position along the edge from node `a` (0) to node `b` (1).
    pub t: T,
}

/// Recorded when an edge crosses the contour more than once; only the
/// crossing nearest node `a` is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultipleCrossings {
    pub edge: usize,
    pub crossings: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intersections<T> {
    /// Sorted by edge index.
    pub candidates: Vec<CutCandidate<T>>,
    pub multiple: Vec<MultipleCrossings>,
}

/// Bucket grid over contour sides.
struct SideIndex<T> {
    origin: Point2<T>,
    cell: T,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<usize>>,
}

impl<T: Scalar> SideIndex<T> {
    fn new(sides: &[Segment<T>], bbox: Rect<T>) -> Self {
        let n = T::from_index(sides.len().max(1));
        let span = bbox.width().max(bbox.height()).max(T::one());
        let cell = (span / n.sqrt()).max(T::lit(1e-6));
        let dim = |e: T| (e / cell).floor().to_usize().unwrap_or(0) + 1;
        let (cols, rows) = (dim(bbox.width()), dim(bbox.height()));
        let mut idx = Self {
            origin: bbox.min,
            cell,
            cols,
            rows,
            buckets: vec![Vec::new(); cols * rows],
        };
        for (i, s) in sides.iter().enumerate() {
            let r = Rect::new(s.a, s.a).including(s.b);
            let (c0, r0, c1, r1) = idx.span(&r);
            for row in r0..=r1 {
                for col in c0..=c1 {
                    idx.buckets[row * cols + col].push(i);
                }
            }
        }
        idx
    }

    fn span(&self, r: &Rect<T>) -> (usize, usize, usize, usize) {
        let f = |v: T, lo: T, n: usize| {
            ((v - lo) / self.cell)
                .floor()
                .to_i64()
                .unwrap_or(0)
                .clamp(0, n as i64 - 1) as usize
        };
        (
            f(r.min.x, self.origin.x, self.cols),
            f(r.min.y, self.origin.y, self.rows),
            f(r.max.x, self.origin.x, self.cols),
            f(r.max.y, self.origin.y, self.rows),
        )
    }

    fn query(&self, r: &Rect<T>, out: &mut Vec<usize>) {
        out.clear();
        let (c0, r0, c1, r1) = self.span(r);
        for row in r0..=r1 {
            for col in c0..=c1 {
                out.extend_from_slice(&self.buckets[row * self.cols + col]);
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}

/// Crossings of every lattice edge with the contour. Touching a contour
/// vertex counts once even though two sides report it.
pub fn intersect_edges_with_contour<T: Scalar>(
    graph: &LatticeGraph<T>,
    contour: &Polygon<T>,
) -> Intersections<T> {
    let sides: Vec<Segment<T>> = contour.sides().map(|(a, b)| Segment { a, b }).collect();
    let index = SideIndex::new(&sides, contour.bbox());
    let cbox = contour.bbox();
    let mut near = Vec::new();
    let mut hits: Vec<T> = Vec::new();
    let mut candidates = Vec::new();
    let mut multiple = Vec::new();
    for (ei, e) in graph.edges.iter().enumerate() {
        let Ok(seg) = Segment::new(graph.position(e.a), graph.position(e.b)) else {
            continue;
        };
        let ebox = Rect::new(seg.a, seg.a).including(seg.b);
        if ebox.max.x < cbox.min.x || ebox.min.x > cbox.max.x || ebox.max.y < cbox.min.y || ebox.min.y > cbox.max.y {
            continue;
        }
        index.query(&ebox, &mut near);
        hits.clear();
        hits.extend(
            near.iter()
                .filter_map(|&si| segment_intersection_params(&seg, &sides[si]).map(|(t, _)| t)),
        );
        if hits.is_empty() {
            continue;
        }
        hits.sort_by(|a, b| a.partial_cmp(b).expect("finite parameter"));
        let tol = T::eps_geom() * T::lit(16.0);
        hits.dedup_by(|b, a| (*b - *a).abs() <= tol);
        if hits.len() > 1 {
            multiple.push(MultipleCrossings {
                edge: ei,
                crossings: hits.len(),
            });
        }
        let t = hits[0];
        candidates.push(CutCandidate {
            edge: ei,
            point: seg.at(t),
            t,
        });
    }
    Intersections {
        candidates,
        multiple,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Edge, LatticeGraph};
    use crate::NodePoint;

    fn graph(pts: &[(f64, f64)], edges: &[(usize, usize)]) -> LatticeGraph<f64> {
        let nodes: Vec<NodePoint<f64>> = pts
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| NodePoint {
                id,
                position: Point2::new(x, y),
                score: 1.0,
            })
            .collect();
        let edges = edges
            .iter()
            .map(|&(a, b)| Edge {
                a,
                b,
                length: nodes[a].position.distance(nodes[b].position),
            })
            .collect();
        LatticeGraph {
            nodes,
            edges,
            mean_knn_distance: 1.0,
            mean_edge_length: 1.0,
        }
    }

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon<f64> {
        Polygon::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
        .unwrap()
    }

    #[test]
    fn midpoint_crossing() {
        let g = graph(&[(0., 0.), (10., 0.)], &[(0, 1)]);
        let c = rect(-5.0, -5.0, 5.0, 5.0);
        let x = intersect_edges_with_contour(&g, &c);
        assert_eq!(x.candidates.len(), 1);
        assert_eq!(x.candidates[0].t, 0.5);
        assert_eq!(x.candidates[0].point, Point2::new(5.0, 0.0));
        assert!(x.multiple.is_empty());
    }

    #[test]
    fn inside_edge_has_no_candidate() {
        let g = graph(&[(0., 0.), (1., 0.)], &[(0, 1)]);
        assert!(intersect_edges_with_contour(&g, &rect(-5.0, -5.0, 5.0, 5.0))
            .candidates
            .is_empty());
    }

    #[test]
    fn double_crossing_keeps_smallest_t() {
        let g = graph(&[(-10., 0.), (10., 0.)], &[(0, 1)]);
        let x = intersect_edges_with_contour(&g, &rect(-5.0, -5.0, 5.0, 5.0));
        assert_eq!(x.candidates[0].t, 0.25);
        assert_eq!(x.multiple, vec![MultipleCrossings { edge: 0, crossings: 2 }]);
    }

    #[test]
    fn through_contour_vertex_counts_once() {
        let g = graph(&[(0., 0.), (10., 10.)], &[(0, 1)]);
        let x = intersect_edges_with_contour(&g, &rect(-5.0, -5.0, 5.0, 5.0));
        assert_eq!(x.candidates.len(), 1);
        assert!(x.multiple.is_empty());
        assert!((x.candidates[0].t - 0.5).abs() < 1e-12);
    }
}
