use std::cmp::Ordering;

use super::CutPoint;
use crate::{Point2, Scalar};

/// How the first cut of a tour is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum StartRule<T> {
    /// Smallest `(y, x)`.
    #[default]
    MinYX,
    /// The cut closest to a given position, e.g. the blade's parking spot.
    NearestTo(Point2<T>),
    /// The cut at this input index.
    Index(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tour<T> {
    pub cuts: Vec<CutPoint<T>>,
    pub travel_length: T,
}

/// Sum of consecutive distances.
pub fn path_length<T: Scalar>(points: impl IntoIterator<Item = Point2<T>>) -> T {
    let mut it = points.into_iter();
    let Some(mut prev) = it.next() else {
        return T::zero();
    };
    it.fold(T::zero(), |acc, p| {
        let d = prev.distance(p);
        prev = p;
        acc + d
    })
}

/// Greedy nearest-neighbour chain. Distance ties go to the smaller `(y, x)`.
pub fn order_cut_points<T: Scalar>(points: Vec<CutPoint<T>>, start: StartRule<T>) -> Tour<T> {
    let n = points.len();
    if n == 0 {
        return Tour {
            cuts: points,
            travel_length: T::zero(),
        };
    }
    let better = |i: usize, j: usize, di: T, dj: T| -> bool {
        match di.partial_cmp(&dj).unwrap_or(Ordering::Equal) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => points[i].point.cmp_yx(&points[j].point).then(i.cmp(&j)) == Ordering::Less,
        }
    };
    let first = match start {
        StartRule::Index(i) if i < n => i,
        StartRule::NearestTo(home) => (1..n).fold(0, |best, i| {
            let (di, db) = (points[i].point.distance_sq(home), points[best].point.distance_sq(home));
            if better(i, best, di, db) { i } else { best }
        }),
        _ => (1..n).fold(0, |best, i| {
            if better(i, best, T::zero(), T::zero()) { i } else { best }
        }),
    };
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = first;
    visited[cur] = true;
    order.push(cur);
    for _ in 1..n {
        let here = points[cur].point;
        let mut best: Option<(usize, T)> = None;
        for (i, p) in points.iter().enumerate() {
            if visited[i] {
                continue;
            }
            let d = here.distance_sq(p.point);
            best = match best {
                Some((b, db)) if !better(i, b, d, db) => Some((b, db)),
                _ => Some((i, d)),
            };
        }
        let (next, _) = best.expect("unvisited point remains");
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    let cuts: Vec<CutPoint<T>> = order.iter().map(|&i| points[i]).collect();
    let travel_length = path_length(cuts.iter().map(|c| c.point));
    Tour {
        cuts,
        travel_length,
    }
}
