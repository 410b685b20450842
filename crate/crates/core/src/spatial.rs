//! Uniform grid hash over a static point set.

use crate::{Point2, Rect, Scalar};

pub struct GridIndex<'a, T> {
    points: &'a [Point2<T>],
    origin: Point2<T>,
    cell: T,
    cols: usize,
    rows: usize,
    // CSR buckets: cell `c` holds items[starts[c]..starts[c + 1]]
    starts: Vec<usize>,
    items: Vec<usize>,
}

impl<'a, T: Scalar> GridIndex<'a, T> {
    /// Cell size chosen for about two points per cell.
    pub fn for_knn(points: &'a [Point2<T>]) -> Self {
        let cell = match Rect::bounding(points.iter().copied()) {
            Some(r) => {
                let n = T::from_index(points.len().max(1));
                let span = r.width().max(r.height());
                let area = r.width() * r.height();
                let by_area = (area * T::lit(2.0) / n).sqrt();
                if by_area > T::zero() {
                    by_area
                } else if span > T::zero() {
                    span / n
                } else {
                    T::one()
                }
            }
            None => T::one(),
        };
        Self::new(points, cell)
    }

    pub fn new(points: &'a [Point2<T>], cell: T) -> Self {
        let bbox = Rect::bounding(points.iter().copied())
            .unwrap_or_else(|| Rect::new(Point2::default(), Point2::default()));
        let dims = |extent: T| {
            (extent / cell)
                .floor()
                .to_usize()
                .unwrap_or(0)
                .saturating_add(1)
                .min(1 << 16)
        };
        let cols = dims(bbox.width());
        let rows = dims(bbox.height());
        let mut idx = Self {
            points,
            origin: bbox.min,
            cell,
            cols,
            rows,
            starts: vec![0; cols * rows + 1],
            items: vec![0; points.len()],
        };
        let cells: Vec<usize> = points.iter().map(|p| idx.cell_of(*p)).collect();
        for &c in &cells {
            idx.starts[c + 1] += 1;
        }
        for c in 0..cols * rows {
            idx.starts[c + 1] += idx.starts[c];
        }
        let mut fill = idx.starts.clone();
        for (i, &c) in cells.iter().enumerate() {
            idx.items[fill[c]] = i;
            fill[c] += 1;
        }
        idx
    }

    fn coords(&self, p: Point2<T>) -> (i64, i64) {
        let cx = ((p.x - self.origin.x) / self.cell).floor().to_i64().unwrap_or(0);
        let cy = ((p.y - self.origin.y) / self.cell).floor().to_i64().unwrap_or(0);
        (cx, cy)
    }

    fn cell_of(&self, p: Point2<T>) -> usize {
        let (cx, cy) = self.coords(p);
        let cx = cx.clamp(0, self.cols as i64 - 1) as usize;
        let cy = cy.clamp(0, self.rows as i64 - 1) as usize;
        cy * self.cols + cx
    }

    fn bucket(&self, cx: i64, cy: i64) -> &[usize] {
        if cx < 0 || cy < 0 || cx >= self.cols as i64 || cy >= self.rows as i64 {
            return &[];
        }
        let c = cy as usize * self.cols + cx as usize;
        &self.items[self.starts[c]..self.starts[c + 1]]
    }

    /// The `k` nearest other points to point `i` as `(distance, index)`,
    /// nearest first, ties by index.
    pub fn k_nearest(&self, i: usize, k: usize) -> Vec<(T, usize)> {
        let q = self.points[i];
        let (qx, qy) = self.coords(q);
        let mut best: Vec<(T, usize)> = Vec::with_capacity(k + 1);
        let max_ring = self.cols.max(self.rows) as i64 + 1;
        for ring in 0..=max_ring {
            for (cx, cy) in ring_cells(qx, qy, ring) {
                for &j in self.bucket(cx, cy) {
                    if j == i {
                        continue;
                    }
                    let d = q.distance(self.points[j]);
                    let pos = best.partition_point(|&(bd, bj)| bd < d || (bd == d && bj < j));
                    if pos < k {
                        best.insert(pos, (d, j));
                        best.truncate(k);
                    }
                }
            }
            // anything outside the scanned square is at least `ring * cell` away
            if best.len() == k && best[k - 1].0 <= T::from_index(ring as usize) * self.cell {
                break;
            }
        }
        best
    }

    /// Indices of points within `radius` of `p` (inclusive), in ascending order.
    pub fn within(&self, p: Point2<T>, radius: T) -> Vec<usize> {
        let lo = self.coords(Point2::new(p.x - radius, p.y - radius));
        let hi = self.coords(Point2::new(p.x + radius, p.y + radius));
        let mut out = Vec::new();
        for cy in lo.1.max(0)..=hi.1.min(self.rows as i64 - 1) {
            for cx in lo.0.max(0)..=hi.0.min(self.cols as i64 - 1) {
                out.extend(
                    self.bucket(cx, cy)
                        .iter()
                        .copied()
                        .filter(|&j| p.distance(self.points[j]) <= radius),
                );
            }
        }
        out.sort_unstable();
        out
    }
}

fn ring_cells(cx: i64, cy: i64, ring: i64) -> Vec<(i64, i64)> {
    if ring == 0 {
        return vec![(cx, cy)];
    }
    let mut out = Vec::with_capacity(8 * ring as usize);
    for dx in -ring..=ring {
        out.push((cx + dx, cy - ring));
        out.push((cx + dx, cy + ring));
    }
    for dy in -ring + 1..ring {
        out.push((cx - ring, cy + dy));
        out.push((cx + ring, cy + dy));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn knn_matches_brute_force(
            raw in prop::collection::vec((0.0..100.0f64, 0.0..30.0f64), 5..80),
            k in 1usize..4,
        ) {
            let pts: Vec<Point2<f64>> = raw.iter().map(|&(x, y)| Point2::new(x, y)).collect();
            let idx = GridIndex::for_knn(&pts);
            for i in 0..pts.len() {
                let mut brute: Vec<(f64, usize)> = (0..pts.len())
                    .filter(|&j| j != i)
                    .map(|j| (pts[i].distance(pts[j]), j))
                    .collect();
                brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
                brute.truncate(k);
                prop_assert_eq!(idx.k_nearest(i, k), brute);
            }
        }

        #[test]
        fn within_matches_brute_force(
            raw in prop::collection::vec((0.0..50.0f64, 0.0..50.0f64), 1..60),
            r in 0.0..20.0f64,
            cell in 0.5..15.0f64,
        ) {
            let pts: Vec<Point2<f64>> = raw.iter().map(|&(x, y)| Point2::new(x, y)).collect();
            let idx = GridIndex::new(&pts, cell);
            for q in &pts {
                let brute: Vec<usize> = (0..pts.len()).filter(|&j| q.distance(pts[j]) <= r).collect();
                prop_assert_eq!(idx.within(*q, r), brute);
            }
        }
    }

    #[test]
    fn collinear_and_coincident_points() {
        let pts: Vec<Point2<f64>> = (0..10).map(|i| Point2::new(i as f64, 0.0)).collect();
        let idx = GridIndex::for_knn(&pts);
        assert_eq!(idx.k_nearest(0, 2), vec![(1.0, 1), (2.0, 2)]);
        let same = vec![Point2::new(1.0, 1.0); 3];
        let idx = GridIndex::for_knn(&same);
        assert_eq!(idx.k_nearest(1, 2), vec![(0.0, 0), (0.0, 2)]);
    }
}
