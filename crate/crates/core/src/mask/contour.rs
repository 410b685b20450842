use super::{MaskError, RasterFrame};
use crate::{BinaryMask, Polygon, Scalar};

// Moore neighbourhood, clockwise on screen (y down), starting west.
const DIRS: [(i64, i64); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn dir_index(d: (i64, i64)) -> usize {
    DIRS.iter().position(|&x| x == d).expect("unit Moore step")
}

/// Moore-neighbour boundary trace of a single 8-connected region.
///
/// Starts at the topmost-then-leftmost set pixel and walks clockwise on
/// screen, stopping when the first move from the start pixel
/// repeats. Returns boundary pixel coordinates `(col, row)` without the
/// closing repeat.
pub fn trace_boundary(mask: &BinaryMask) -> Result<Vec<(i64, i64)>, MaskError> {
    let first = mask
        .bits()
        .iter()
        .position(|b| *b)
        .ok_or(MaskError::EmptyMask)?;
    let components = mask.components().len();
    if components > 1 {
        return Err(MaskError::MultipleComponents(components));
    }
    let start = ((first % mask.width()) as i64, (first / mask.width()) as i64);
    // the west neighbour of the first pixel in scan order is clear
    let mut back = 0usize;
    let mut path = vec![start];
    let mut cur = start;
    let limit = 4 * mask.count() + 8;
    while let Some(i) = (1..=8).find(|i| {
        let d = DIRS[(back + i) % 8];
        mask.get_signed(cur.0 + d.0, cur.1 + d.1)
    }) {
        let d = DIRS[(back + i) % 8];
        let cand = (cur.0 + d.0, cur.1 + d.1);
        // the first move repeats: the loop is closed
        if cur == start && path.len() > 1 && cand == path[1] {
            path.pop();
            break;
        }
        let prev = DIRS[(back + i - 1) % 8];
        back = dir_index((cur.0 + prev.0 - cand.0, cur.1 + prev.1 - cand.1));
        cur = cand;
        path.push(cur);
        if path.len() > limit {
            break;
        }
    }
    Ok(path)
}

/// Drops vertices whose incoming and outgoing steps are equal.
fn compress(path: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let n = path.len();
    if n < 3 {
        return path.to_vec();
    }
    (0..n)
        .filter(|&i| {
            let (p, c, q) = (path[(i + n - 1) % n], path[i], path[(i + 1) % n]);
            (c.0 - p.0, c.1 - p.1) != (q.0 - c.0, q.1 - c.1)
        })
        .map(|i| path[i])
        .collect()
}

/// Traces the region's outline and returns it in image coordinates as a
/// simple polygon through boundary pixel centers, collinear runs merged.
pub fn trace_contour<T: Scalar>(
    mask: &BinaryMask,
    frame: &RasterFrame<T>,
) -> Result<Polygon<T>, MaskError> {
    let path = compress(&trace_boundary(mask)?);
    if path.len() < 3 {
        return Err(MaskError::BelowMinimumArea);
    }
    let pts = path.iter().map(|&(c, r)| frame.to_image(c, r)).collect();
    Polygon::new(pts).map_err(|e| match e {
        crate::geometry::GeometryError::ZeroArea
        | crate::geometry::GeometryError::TooFewVertices(_) => MaskError::BelowMinimumArea,
        other => MaskError::NotSimple(other),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::RasterConfig;
    use crate::{point_in_polygon, Point2, Rect};
    use proptest::prelude::*;

    fn unit_frame(w: usize, h: usize) -> RasterFrame<f64> {
        RasterFrame::covering(
            &RasterConfig::new(1, Point2::new(0.0, 0.0)).unwrap(),
            &Rect::new(Point2::new(0.0, 0.0), Point2::new(w as f64 - 1.0, h as f64 - 1.0)),
        )
        .unwrap()
    }

    fn block(w: usize, h: usize, x0: usize, y0: usize, bw: usize, bh: usize) -> BinaryMask {
        let mut m = BinaryMask::new(w, h);
        for r in y0..y0 + bh {
            for c in x0..x0 + bw {
                m.set(c, r, true);
            }
        }
        m
    }

    #[test]
    fn solid_block_gives_four_corners() {
        let m = block(5, 5, 1, 1, 3, 3);
        assert_eq!(trace_boundary(&m).unwrap().len(), 8);
        let poly = trace_contour(&m, &unit_frame(5, 5)).unwrap();
        let v: Vec<(f64, f64)> = poly.vertices().iter().map(|p| (p.x, p.y)).collect();
        assert_eq!(v, vec![(1.0, 1.0), (3.0, 1.0), (3.0, 3.0), (1.0, 3.0)]);
        // clockwise on screen is positive shoelace with y down
        assert!(poly.signed_area() > 0.0);
    }

    #[test]
    fn error_cases() {
        let f = unit_frame(4, 4);
        assert_eq!(trace_contour(&BinaryMask::new(4, 4), &f), Err(MaskError::EmptyMask));
        let single = block(4, 4, 1, 1, 1, 1);
        let err = trace_contour(&single, &f).unwrap_err();
        assert_eq!(err, MaskError::BelowMinimumArea);
        assert_eq!(err.to_string(), "contour below minimum area");
        let line = block(4, 4, 0, 1, 4, 1);
        assert_eq!(trace_boundary(&line).unwrap().len(), 6);
        assert_eq!(trace_contour(&line, &f), Err(MaskError::BelowMinimumArea));
        let mut two = block(6, 6, 0, 0, 2, 2);
        two.set(4, 4, true);
        two.set(5, 4, true);
        assert_eq!(trace_contour(&two, &unit_frame(6, 6)), Err(MaskError::MultipleComponents(2)));
    }

    #[test]
    fn concave_shape() {
        // L shape
        let mut m = block(6, 6, 1, 1, 4, 2);
        for r in 3..5 {
            for c in 1..3 {
                m.set(c, r, true);
            }
        }
        let poly = trace_contour(&m, &unit_frame(6, 6)).unwrap();
        // the inner corner is cut diagonally between 8-connected centers
        assert_eq!(poly.len(), 7);
        assert_eq!(poly.area(), 5.5);
    }

    /// Chains of overlapping disks.
    fn blob() -> impl Strategy<Value = BinaryMask> {
        (prop::collection::vec((-4i64..=4, -4i64..=4, 3.0..6.0f64), 1..6), 20i64..44, 20i64..44).prop_map(|(steps, x0, y0)| {
            let mut m = BinaryMask::new(64, 64);
            let (mut cx, mut cy) = (x0, y0);
            for (dx, dy, r) in steps {
                for row in 0..64i64 {
                    for col in 0..64i64 {
                        if ((col - cx).pow(2) + (row - cy).pow(2)) as f64 <= r * r {
                            m.set(col as usize, row as usize, true);
                        }
                    }
                }
                cx = (cx + dx).clamp(6, 57);
                cy = (cy + dy).clamp(6, 57);
            }
            m
        })
    }

    fn background(m: &BinaryMask) -> Vec<bool> {
        // clear pixels 4-connected to the image border
        let (w, h) = (m.width() as i64, m.height() as i64);
        let mut seen = vec![false; (w * h) as usize];
        let mut stack: Vec<(i64, i64)> = Vec::new();
        for c in 0..w {
            stack.push((c, 0));
            stack.push((c, h - 1));
        }
        for r in 0..h {
            stack.push((0, r));
            stack.push((w - 1, r));
        }
        while let Some((c, r)) = stack.pop() {
            if c < 0 || r < 0 || c >= w || r >= h || m.get_signed(c, r) || seen[(r * w + c) as usize] {
                continue;
            }
            seen[(r * w + c) as usize] = true;
            stack.extend([(c + 1, r), (c - 1, r), (c, r + 1), (c, r - 1)]);
        }
        seen
    }

    proptest! {
        #[test]
        fn contour_encloses_blob(m in blob()) {
            let f = unit_frame(64, 64);
            let poly = trace_contour(&m, &f).unwrap();
            let outside = background(&m);
            for r in 0..64 {
                for c in 0..64 {
                    let p = f.to_image(c as i64, r as i64);
                    let strictly_inside = point_in_polygon(p, &poly);
                    if m.get(c, r) {
                        prop_assert!(strictly_inside || poly.on_boundary(p), "set pixel ({c},{r}) outside");
                    } else if outside[r * 64 + c] {
                        prop_assert!(!strictly_inside, "background pixel ({c},{r}) inside");
                    }
                }
            }
        }
    }
}
