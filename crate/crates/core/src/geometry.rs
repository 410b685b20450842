//! Planar primitives: points, segments, simple polygons and cut-plane angles.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon side {0} has zero length")]
    DegenerateSide(usize),
    #[error("polygon sides {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
}

/// A point in continuous image coordinates (pixels, y pointing down).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    #[inline]
    pub fn distance_sq(self, o: Self) -> T {
        (self - o).norm_sq()
    }

    /// `self + t * (to - self)`.
    #[inline]
    pub fn lerp(self, to: Self, t: T) -> Self {
        self + (to - self) * t
    }

    /// Lexicographic `(y, x)` order, the reading order used for ids and tie breaks.
    pub fn cmp_yx(&self, o: &Self) -> Ordering {
        self.y
            .partial_cmp(&o.y)
            .unwrap_or(Ordering::Equal)
            .then(self.x.partial_cmp(&o.x).unwrap_or(Ordering::Equal))
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Axis-aligned rectangle in image coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub min: Point2<T>,
    pub max: Point2<T>,
}

impl<T: Scalar> Rect<T> {
    pub fn new(min: Point2<T>, max: Point2<T>) -> Self {
        Self { min, max }
    }

    /// Bounding box of a non-empty point set.
    pub fn bounding<I: IntoIterator<Item = Point2<T>>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        Some(it.fold(Self::new(first, first), |r, p| r.including(p)))
    }

    pub fn including(self, p: Point2<T>) -> Self {
        Self {
            min: Point2::new(self.min.x.min(p.x), self.min.y.min(p.y)),
            max: Point2::new(self.max.x.max(p.x), self.max.y.max(p.y)),
        }
    }

    pub fn expanded(self, margin: T) -> Self {
        Self {
            min: Point2::new(self.min.x - margin, self.min.y - margin),
            max: Point2::new(self.max.x + margin, self.max.y + margin),
        }
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_rect(&self, o: &Self) -> bool {
        self.contains(o.min) && self.contains(o.max)
    }

    pub fn width(&self) -> T {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> T {
        self.max.y - self.min.y
    }
}

/// Line segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub a: Point2<T>,
    pub b: Point2<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(a: Point2<T>, b: Point2<T>) -> Result<Self, GeometryError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if a == b {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Self { a, b })
    }

    pub fn direction(&self) -> Point2<T> {
        self.b - self.a
    }

    pub fn length(&self) -> T {
        self.direction().norm()
    }

    pub fn at(&self, t: T) -> Point2<T> {
        self.a.lerp(self.b, t)
    }

    /// Direction angle in degrees measured from +x toward +y, in (-180, 180].
    pub fn direction_degrees(&self) -> T {
        let d = self.direction();
        d.y.atan2(d.x).to_degrees()
    }

    fn bbox(&self) -> Rect<T> {
        Rect::new(self.a, self.a).including(self.b)
    }

    fn key(&self) -> [T; 4] {
        [self.a.x, self.a.y, self.b.x, self.b.y]
    }

    /// Euclidean distance from `p` to the closed segment.
    pub fn distance_to(&self, p: Point2<T>) -> T {
        let d = self.direction();
        let t = ((p - self.a).dot(d) / d.norm_sq()).max(T::zero()).min(T::one());
        p.distance(self.at(t))
    }
}

/// Parametric intersection of two segments: `(t, u)` with the crossing at
/// `s1.at(t) == s2.at(u)`. Touching endpoints count as crossings; parallel
/// and collinear-overlapping pairs report `None`.
pub fn segment_intersection_params<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> Option<(T, T)> {
    // evaluate in a canonical argument order so swapping the inputs gives bit-identical results
    let swapped = lex_cmp(&s1.key(), &s2.key()) == Ordering::Greater;
    let (p, q) = if swapped { (s2, s1) } else { (s1, s2) };
    let r = p.direction();
    let s = q.direction();
    let denom = r.cross(s);
    let eps = T::eps_geom();
    if denom.abs() <= eps * r.norm() * s.norm() {
        return None;
    }
    let qp = q.a - p.a;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let lo = -eps;
    let hi = T::one() + eps;
    if t < lo || t > hi || u < lo || u > hi {
        return None;
    }
    let t = t.max(T::zero()).min(T::one());
    let u = u.max(T::zero()).min(T::one());
    Some(if swapped { (u, t) } else { (t, u) })
}

/// The crossing point of two segments, if any. See [`segment_intersection_params`].
pub fn segment_intersection<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> Option<Point2<T>> {
    let (t, u) = segment_intersection_params(s1, s2)?;
    // take the point from the canonical first segment for symmetry
    if lex_cmp(&s1.key(), &s2.key()) == Ordering::Greater {
        Some(s2.at(u))
    } else {
        Some(s1.at(t))
    }
}

fn lex_cmp<T: Scalar>(a: &[T; 4], b: &[T; 4]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Closed simple polygon with nonzero area; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<T> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> Polygon<T> {
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeometryError::DegenerateSide(i));
            }
        }
        let poly = Self { vertices };
        let (v0, v1) = (poly.vertices[0], poly.vertices[1]);
        let axis = v1 - v0;
        let collinear = poly.vertices.iter().all(|&p| {
            (p - v0).cross(axis).abs() <= T::eps_geom() * axis.norm() * (p - v0).norm().max(T::one())
        });
        if collinear {
            return Err(GeometryError::ZeroArea);
        }
        if let Some((i, j)) = poly.first_self_intersection() {
            return Err(GeometryError::SelfIntersecting(i, j));
        }
        if poly.signed_area().abs() <= T::eps_geom() {
            return Err(GeometryError::ZeroArea);
        }
        Ok(poly)
    }

    /// Regular `n`-gon inscribed in the circle of the given center and radius.
    pub fn regular(center: Point2<T>, radius: T, n: usize) -> Result<Self, GeometryError> {
        let step = T::TAU() / T::from_index(n.max(1));
        Self::new(
            (0..n)
                .map(|i| {
                    let a = step * T::from_index(i);
                    Point2::new(center.x + radius * a.cos(), center.y + radius * a.sin())
                })
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point2<T>> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Sides as `(start, end)` pairs, including the closing side.
    pub fn sides(&self) -> impl Iterator<Item = (Point2<T>, Point2<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area; positive when the vertices turn from +x toward +y.
    pub fn signed_area(&self) -> T {
        signed_area(&self.vertices)
    }

    pub fn area(&self) -> T {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> T {
        self.sides().fold(T::zero(), |acc, (a, b)| acc + a.distance(b))
    }

    pub fn bbox(&self) -> Rect<T> {
        Rect::bounding(self.vertices.iter().copied()).expect("polygon is non-empty")
    }

    pub fn translated(&self, v: Point2<T>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&p| p + v).collect(),
        }
    }

    /// True when `p` lies within the geometric tolerance of any side.
    pub fn on_boundary(&self, p: Point2<T>) -> bool {
        let tol = boundary_tolerance(p);
        self.sides().any(|(a, b)| {
            let d = b - a;
            let len_sq = d.norm_sq();
            let t = ((p - a).dot(d) / len_sq).max(T::zero()).min(T::one());
            p.distance(a.lerp(b, t)) <= tol
        })
    }

    /// Sweep over x-extents; adjacent sides may only share their common vertex.
    fn first_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        let segs: Vec<Segment<T>> = self
            .sides()
            .map(|(a, b)| Segment { a, b })
            .collect();
        for i in 0..n {
            let j = (i + 1) % n;
            let (d0, d1) = (segs[i].direction(), segs[j].direction());
            let scale = d0.norm() * d1.norm();
            if d0.cross(d1).abs() <= T::eps_geom() * scale && d0.dot(d1) < T::zero() {
                return Some((i, j));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let boxes: Vec<Rect<T>> = segs.iter().map(|s| s.bbox()).collect();
        order.sort_by(|&a, &b| {
            boxes[a]
                .min
                .x
                .partial_cmp(&boxes[b].min.x)
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        for (oi, &i) in order.iter().enumerate() {
            for &j in &order[oi + 1..] {
                if boxes[j].min.x > boxes[i].max.x {
                    break;
                }
                if boxes[j].min.y > boxes[i].max.y || boxes[j].max.y < boxes[i].min.y {
                    continue;
                }
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                if adjacent {
                    continue;
                }
                if segments_touch(&segs[i], &segs[j]) {
                    return Some((i.min(j), i.max(j)));
                }
            }
        }
        None
    }
}

pub(crate) fn signed_area<T: Scalar>(pts: &[Point2<T>]) -> T {
    let n = pts.len();
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc + pts[i].cross(pts[(i + 1) % n]);
    }
    acc * T::lit(0.5)
}

fn boundary_tolerance<T: Scalar>(p: Point2<T>) -> T {
    T::eps_geom() * T::one().max(p.x.abs()).max(p.y.abs())
}

/// Any contact between two segments, including collinear overlap.
fn segments_touch<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> bool {
    if segment_intersection_params(s1, s2).is_some() {
        return true;
    }
    let tol = T::eps_geom();
    s1.distance_to(s2.a) <= tol * T::one().max(s2.a.x.abs()).max(s2.a.y.abs())
        || s1.distance_to(s2.b) <= tol * T::one().max(s2.b.x.abs()).max(s2.b.y.abs())
        || s2.distance_to(s1.a) <= tol * T::one().max(s1.a.x.abs()).max(s1.a.y.abs())
        || s2.distance_to(s1.b) <= tol * T::one().max(s1.b.x.abs()).max(s1.b.y.abs())
}

/// Strict interior test. Points on the boundary report `false`.
///
/// Uses ray crossing toward +x with the half-open rule `(y_i > y) != (y_j > y)`.
pub fn point_in_polygon<T: Scalar>(p: Point2<T>, poly: &Polygon<T>) -> bool {
    if poly.on_boundary(p) {
        return false;
    }
    crossing_parity(p, poly.vertices())
}

pub(crate) fn crossing_parity<T: Scalar>(p: Point2<T>, pts: &[Point2<T>]) -> bool {
    let n = pts.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (vi, vj) = (pts[i], pts[j]);
        if (vi.y > p.y) != (vj.y > p.y) {
            let x = vi.x + (p.y - vi.y) * (vj.x - vi.x) / (vj.y - vi.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Orientation of an undirected cut plane, degrees in `[0, 180)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PlaneAngle<T> {
    degrees: T,
}

impl<T: Scalar> PlaneAngle<T> {
    pub fn from_degrees(deg: T) -> Self {
        let half = T::lit(180.0);
        let mut d = deg % half;
        if d < T::zero() {
            d = d + half;
        }
        // -tiny + 180 rounds up to 180
        if d >= half {
            d = d - half;
        }
        Self { degrees: d }
    }

    pub fn degrees(&self) -> T {
        self.degrees
    }

    /// Smallest difference to another plane angle, modulo 180, in `[0, 90]`.
    pub fn separation(&self, o: &Self) -> T {
        let d = (self.degrees - o.degrees).abs();
        d.min(T::lit(180.0) - d)
    }
}

/// The plane perpendicular to an edge with the given direction.
pub fn perpendicular_angle<T: Scalar>(edge_direction_degrees: T) -> PlaneAngle<T> {
    PlaneAngle::from_degrees(edge_direction_degrees + T::lit(90.0))
}
