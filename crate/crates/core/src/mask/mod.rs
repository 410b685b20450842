//! Raster masks over the lattice: cell faces, target fill, dilation and
//! boundary tracing.
//!
//! A [`RasterFrame`] fixes how mask pixels map back to image space: mask
//! pixel `(col, row)` sits at `origin + (col, row) / supersample`.

mod contour;
mod dilate;
mod faces;

pub use contour::{trace_boundary, trace_contour};
pub use dilate::{dilate, distance_transform_sq};
pub use faces::{extract_faces, face_polygon, FaceSet};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::{point_in_polygon, BinaryMask, LatticeGraph, Point2, Polygon, Rect, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaskError {
    #[error("supersample must be at least 1")]
    ZeroSupersample,
    #[error("raster bounds end before the frame origin")]
    EmptyFrame,
    #[error("polygon extends outside the raster bounds")]
    PolygonOutOfBounds,
    #[error("dilation radius must be non-negative")]
    NegativeRadius,
    #[error("mask has no set pixels")]
    EmptyMask,
    #[error("mask has {0} connected components, expected 1")]
    MultipleComponents(usize),
    #[error("contour below minimum area")]
    BelowMinimumArea,
    #[error("traced contour is not a simple polygon: {0}")]
    NotSimple(GeometryError),
    #[error("target too small for lattice")]
    TargetTooSmall,
}

/// Mask resolution and placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterConfig<T> {
    /// Mask pixels per image pixel along each axis.
    pub supersample: usize,
    /// Image coordinate of mask pixel (0, 0).
    pub origin: Point2<T>,
}

impl<T: Scalar> RasterConfig<T> {
    pub fn new(supersample: usize, origin: Point2<T>) -> Result<Self, MaskError> {
        if supersample == 0 {
            return Err(MaskError::ZeroSupersample);
        }
        Ok(Self {
            supersample,
            origin,
        })
    }
}

/// A [`RasterConfig`] together with concrete mask dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterFrame<T> {
    pub origin: Point2<T>,
    pub supersample: usize,
    pub width: usize,
    pub height: usize,
}

impl<T: Scalar> RasterFrame<T> {
    /// Smallest frame anchored at `rc.origin` whose pixels reach `bounds.max`.
    pub fn covering(rc: &RasterConfig<T>, bounds: &Rect<T>) -> Result<Self, MaskError> {
        if rc.supersample == 0 {
            return Err(MaskError::ZeroSupersample);
        }
        let ss = T::from_index(rc.supersample);
        let span = |hi: T, lo: T| -> Result<usize, MaskError> {
            let cells = ((hi - lo) * ss).ceil();
            if !(cells >= T::zero()) {
                return Err(MaskError::EmptyFrame);
            }
            cells.to_usize().map(|c| c + 1).ok_or(MaskError::EmptyFrame)
        };
        Ok(Self {
            origin: rc.origin,
            supersample: rc.supersample,
            width: span(bounds.max.x, rc.origin.x)?,
            height: span(bounds.max.y, rc.origin.y)?,
        })
    }

    /// Frame whose origin is `bounds.min - margin`, covering `bounds.max + margin`.
    pub fn around(bounds: &Rect<T>, margin: T, supersample: usize) -> Result<Self, MaskError> {
        let r = bounds.expanded(margin);
        Self::covering(&RasterConfig::new(supersample, r.min)?, &r)
    }

    pub fn blank(&self) -> BinaryMask {
        BinaryMask::new(self.width, self.height)
    }

    /// Image length of one mask pixel.
    pub fn pixel_size(&self) -> T {
        T::one() / T::from_index(self.supersample)
    }

    #[inline]
    pub fn to_image(&self, col: i64, row: i64) -> Point2<T> {
        let ss = T::from_index(self.supersample);
        Point2::new(
            self.origin.x + T::from_i64(col).expect("pixel index") / ss,
            self.origin.y + T::from_i64(row).expect("pixel index") / ss,
        )
    }

    /// Continuous mask coordinates of an image point.
    pub fn to_mask(&self, p: Point2<T>) -> Point2<T> {
        (p - self.origin) * T::from_index(self.supersample)
    }

    pub fn image_rect(&self) -> Rect<T> {
        Rect::new(
            self.origin,
            self.to_image(self.width as i64 - 1, self.height as i64 - 1),
        )
    }
}

/// Scanline fill of `poly` into a fresh mask. A bit is set iff its pixel
/// center is strictly inside, matching [`point_in_polygon`].
pub fn rasterize_polygon<T: Scalar>(
    poly: &Polygon<T>,
    frame: &RasterFrame<T>,
) -> Result<BinaryMask, MaskError> {
    let mut mask = frame.blank();
    fill_polygon(&mut mask, poly, frame)?;
    Ok(mask)
}

/// ORs the strict interior of `poly` into `mask`.
pub fn fill_polygon<T: Scalar>(
    mask: &mut BinaryMask,
    poly: &Polygon<T>,
    frame: &RasterFrame<T>,
) -> Result<(), MaskError> {
    if !frame.image_rect().contains_rect(&poly.bbox()) {
        return Err(MaskError::PolygonOutOfBounds);
    }
    let bb = poly.bbox();
    let lo = frame.to_mask(bb.min);
    let hi = frame.to_mask(bb.max);
    let row_lo = lo.y.floor().to_i64().unwrap_or(0).max(0);
    let row_hi = hi.y.ceil().to_i64().unwrap_or(0).min(frame.height as i64 - 1);
    let col_max = frame.width as i64 - 1;
    let verts = poly.vertices();
    let n = verts.len();
    let mut xs: Vec<(T, T)> = Vec::with_capacity(8);
    for row in row_lo..=row_hi {
        let y = frame.to_image(0, row).y;
        let tol_y = T::eps_geom() * T::one().max(y.abs());
        let vertex_row = verts.iter().any(|v| (v.y - y).abs() <= tol_y * T::lit(2.0));
        // crossings with a horizontal window inside which the boundary test decides
        xs.clear();
        let mut j = n - 1;
        for i in 0..n {
            let (vi, vj) = (verts[i], verts[j]);
            if (vi.y > y) != (vj.y > y) {
                let x = vi.x + (y - vi.y) * (vj.x - vi.x) / (vj.y - vi.y);
                let slope = (vj - vi).norm() / (vj.y - vi.y).abs();
                let tol = T::eps_geom() * T::one().max(x.abs()).max(y.abs()) * slope * T::lit(2.0);
                xs.push((x, tol));
            }
            j = i;
        }
        if xs.is_empty() {
            continue;
        }
        xs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite crossings"));
        let first = frame.to_mask(Point2::new(xs[0].0, y)).x.floor();
        let last = frame.to_mask(Point2::new(xs[xs.len() - 1].0, y)).x.ceil();
        let c0 = first.to_i64().unwrap_or(0).max(0);
        let c1 = last.to_i64().unwrap_or(0).min(col_max);
        let mut k = 0; // crossings with x <= px
        for col in c0..=c1 {
            let p = frame.to_image(col, row);
            while k < xs.len() && xs[k].0 <= p.x {
                k += 1;
            }
            // parity of crossings strictly right of p
            if (xs.len() - k).is_multiple_of(2) {
                continue;
            }
            let near = vertex_row
                || xs[k.saturating_sub(1)..(k + 1).min(xs.len())]
                    .iter()
                    .any(|(x, tol)| (p.x - *x).abs() <= *tol);
            if near && poly.on_boundary(p) {
                continue;
            }
            mask.set(col as usize, row as usize, true);
        }
    }
    Ok(())
}

/// Indices of faces whose every vertex lies strictly inside `target`.
pub fn kept_faces<T: Scalar>(
    graph: &LatticeGraph<T>,
    faces: &FaceSet,
    target: &Polygon<T>,
) -> Vec<usize> {
    faces
        .faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.iter().all(|&v| point_in_polygon(graph.position(v), target)))
        .map(|(i, _)| i)
        .collect()
}

/// Union of the rasterized faces listed in `kept`.
pub fn rasterize_faces<T: Scalar>(
    graph: &LatticeGraph<T>,
    faces: &FaceSet,
    kept: &[usize],
    frame: &RasterFrame<T>,
) -> Result<BinaryMask, MaskError> {
    let mut mask = frame.blank();
    for &fi in kept {
        if let Some(poly) = face_polygon(graph, &faces.faces[fi]) {
            fill_polygon(&mut mask, &poly, frame)?;
        }
    }
    Ok(mask)
}

/// Structure-aware target mask: the lattice cells that fit inside the target.
#[derive(Debug, Clone)]
pub struct StructureMask {
    pub mask: BinaryMask,
    pub faces: FaceSet,
    /// Indices into `faces.faces`.
    pub kept: Vec<usize>,
}

/// Builds the union of cells lying fully inside `target`, rasterized on the
/// frame anchored at `rc.origin` that covers `bounds`.
pub fn structure_mask<T: Scalar>(
    graph: &LatticeGraph<T>,
    target: &Polygon<T>,
    rc: &RasterConfig<T>,
    bounds: &Rect<T>,
) -> Result<StructureMask, MaskError> {
    let frame = RasterFrame::covering(rc, bounds)?;
    let faces = extract_faces(graph);
    let kept = kept_faces(graph, &faces, target);
    if kept.is_empty() {
        return Err(MaskError::TargetTooSmall);
    }
    let mask = rasterize_faces(graph, &faces, &kept, &frame)?;
    Ok(StructureMask { mask, faces, kept })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_graph, nodes_from_points, GraphConfig};
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn frame(ss: usize, lo: f64, hi: f64) -> RasterFrame<f64> {
        RasterFrame::covering(
            &RasterConfig::new(ss, p(lo, lo)).unwrap(),
            &Rect::new(p(lo, lo), p(hi, hi)),
        )
        .unwrap()
    }

    #[test]
    fn frame_mapping() {
        let f = frame(2, -1.0, 4.0);
        assert_eq!((f.width, f.height), (11, 11));
        assert_eq!(f.to_image(3, 4), p(0.5, 1.0));
        assert_eq!(f.to_mask(p(0.5, 1.0)), p(3.0, 4.0));
        assert!(RasterConfig::new(0, p(0.0, 0.0)).is_err());
    }

    #[test]
    fn square_fill_counts() {
        let sq = Polygon::new(vec![p(0., 0.), p(10., 0.), p(10., 10.), p(0., 10.)]).unwrap();
        let m = rasterize_polygon(&sq, &frame(1, -2.0, 12.0)).unwrap();
        // boundary pixels excluded: 9 x 9 interior samples
        assert_eq!(m.count(), 81);
        assert!((m.count() as f64 - 100.0).abs() <= sq.perimeter());
        let tri = Polygon::new(vec![p(0., 0.), p(10., 0.), p(0., 10.)]).unwrap();
        let m = rasterize_polygon(&tri, &frame(1, -2.0, 12.0)).unwrap();
        assert!((m.count() as f64 - 50.0).abs() <= tri.perimeter());
    }

    #[test]
    fn out_of_bounds() {
        let sq = Polygon::new(vec![p(0., 0.), p(10., 0.), p(10., 10.), p(0., 10.)]).unwrap();
        assert_eq!(
            rasterize_polygon(&sq, &frame(1, 1.0, 12.0)),
            Err(MaskError::PolygonOutOfBounds)
        );
    }

    #[test]
    fn supersample_scaling() {
        let poly = Polygon::new(vec![p(1.3, 2.1), p(17.8, 4.4), p(14.2, 15.9), p(5.5, 12.7), p(3.1, 8.0)]).unwrap();
        let counts: Vec<f64> = [1, 2, 4]
            .iter()
            .map(|&ss| rasterize_polygon(&poly, &frame(ss, 0.0, 20.0)).unwrap().count() as f64)
            .collect();
        let rel = 2.0 * poly.perimeter() / poly.area();
        for w in counts.windows(2) {
            assert!((w[1] / (4.0 * w[0]) - 1.0).abs() <= rel, "{counts:?}");
        }
        for (c, ss) in counts.iter().zip([1.0, 2.0, 4.0]) {
            assert!((c / (ss * ss) - poly.area()).abs() <= poly.perimeter());
        }
    }

    fn hex_lattice_graph() -> LatticeGraph<f64> {
        // two cells sharing a wall, pointy-top, edge 10
        let w = 10.0 * 3f64.sqrt();
        let pts = vec![
            p(20.0, 10.0),
            p(20.0 + w, 10.0),
            p(20.0 - w / 2.0, 15.0),
            p(20.0 + w / 2.0, 15.0),
            p(20.0 + 1.5 * w, 15.0),
            p(20.0 - w / 2.0, 25.0),
            p(20.0 + w / 2.0, 25.0),
            p(20.0 + 1.5 * w, 25.0),
            p(20.0, 30.0),
            p(20.0 + w, 30.0),
        ];
        build_graph(nodes_from_points(&pts), &GraphConfig::default()).unwrap()
    }

    #[test]
    fn structure_mask_keeps_contained_cells() {
        let g = hex_lattice_graph();
        let rc = RasterConfig::new(1, p(0.0, 0.0)).unwrap();
        let bounds = Rect::new(p(0.0, 0.0), p(60.0, 40.0));
        let huge = Polygon::regular(p(30.0, 20.0), 500.0, 32).unwrap();
        let s = structure_mask(&g, &huge, &rc, &bounds).unwrap();
        assert_eq!(s.kept.len(), 2);
        let mut union = s.mask.clone();
        for f in &s.faces.faces {
            fill_polygon(&mut union, &face_polygon(&g, f).unwrap(), &RasterFrame::covering(&rc, &bounds).unwrap()).unwrap();
        }
        assert_eq!(union, s.mask);
        let tiny = Polygon::regular(p(20.0, 20.0), 2.0, 8).unwrap();
        assert_eq!(
            structure_mask(&g, &tiny, &rc, &bounds).unwrap_err(),
            MaskError::TargetTooSmall
        );
        assert_eq!(MaskError::TargetTooSmall.to_string(), "target too small for lattice");
    }

    fn random_polygon() -> impl Strategy<Value = Polygon<f64>> {
        // star-shaped around a center with random radii
        (prop::collection::vec(2.0..15.0f64, 3..14), 16.0..24.0f64, 16.0..24.0f64).prop_filter_map(
            "invalid",
            |(radii, cx, cy)| {
                let n = radii.len();
                let pts = radii
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let a = std::f64::consts::TAU * i as f64 / n as f64;
                        p(cx + r * a.cos(), cy + r * a.sin())
                    })
                    .collect();
                Polygon::new(pts).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn scanline_matches_point_test(poly in random_polygon(), ss in 1usize..4) {
            let f = frame(ss, 0.0, 40.0);
            let m = rasterize_polygon(&poly, &f).unwrap();
            for row in 0..f.height {
                for col in 0..f.width {
                    let q = f.to_image(col as i64, row as i64);
                    prop_assert_eq!(m.get(col, row), point_in_polygon(q, &poly), "at {:?}", q);
                }
            }
        }

        #[test]
        fn axis_aligned_integer_polygons_match(
            x0 in 0i32..10, y0 in 0i32..10, w in 1i32..10, h in 1i32..10, notch in 0i32..3,
        ) {
            // rectilinear shapes put vertices and horizontal sides exactly on sample rows
            let (x0, y0, w, h) = (x0 as f64, y0 as f64, w as f64, h as f64);
            let nx = (notch as f64).min(w - 0.5).max(0.5);
            let poly = Polygon::new(vec![
                p(x0, y0), p(x0 + w, y0), p(x0 + w, y0 + h), p(x0 + nx, y0 + h),
                p(x0 + nx, y0 + h + 2.0), p(x0, y0 + h + 2.0),
            ]).unwrap();
            let f = frame(2, 0.0, 25.0);
            let m = rasterize_polygon(&poly, &f).unwrap();
            for row in 0..f.height {
                for col in 0..f.width {
                    let q = f.to_image(col as i64, row as i64);
                    prop_assert_eq!(m.get(col, row), point_in_polygon(q, &poly), "at {:?}", q);
                }
            }
        }

        #[test]
        fn enlarging_target_keeps_faces(r1 in 5.0..40.0f64, dr in 0.0..30.0f64) {
            let g = hex_lattice_graph();
            let faces = extract_faces(&g);
            let c = p(32.0, 20.0);
            let small = Polygon::regular(c, r1, 48).unwrap();
            let big = Polygon::regular(c, r1 + dr, 48).unwrap();
            let k1 = kept_faces(&g, &faces, &small);
            let k2 = kept_faces(&g, &faces, &big);
            prop_assert!(k1.iter().all(|f| k2.contains(f)));
        }
    }
}
