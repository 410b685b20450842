//! SVG 1.1 renderings of lattices, targets, contours and cut marks.

use std::fmt::Write;

use crate::{LatticeGraph, Point2, Polygon, Rect, Scalar};

/// `M x y L x y ... Z` with three decimals.
pub fn svg_path<T: Scalar>(poly: &Polygon<T>) -> String {
    let mut d = String::new();
    for (i, p) in poly.vertices().iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{:.3} {:.3} ", p.x.as_f64(), p.y.as_f64());
    }
    d.push('Z');
    d
}

/// A cut mark: blade position and plane angle in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutMark {
    pub x: f64,
    pub y: f64,
    pub angle_deg: f64,
}

/// Layered drawing: lattice (gray), target (green), cut contour (blue) and
/// cut marks as short red strokes along the blade plane.
pub struct SvgScene<'a, T> {
    pub graph: Option<&'a LatticeGraph<T>>,
    pub target: Option<&'a Polygon<T>>,
    pub contour: Option<&'a Polygon<T>>,
    pub cuts: &'a [CutMark],
    /// Half-length of a cut stroke in pixels.
    pub mark_half_len: f64,
}

impl<T: Scalar> SvgScene<'_, T> {
    fn bounds(&self) -> Rect<f64> {
        let mut pts: Vec<Point2<f64>> = Vec::new();
        let conv = |p: &Point2<T>| Point2::new(p.x.as_f64(), p.y.as_f64());
        if let Some(g) = self.graph {
            pts.extend(g.nodes.iter().map(|n| conv(&n.position)));
        }
        for poly in [self.target, self.contour].into_iter().flatten() {
            pts.extend(poly.vertices().iter().map(conv));
        }
        pts.extend(self.cuts.iter().map(|c| Point2::new(c.x, c.y)));
        Rect::bounding(pts)
            .unwrap_or_else(|| Rect::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)))
            .expanded(self.mark_half_len.max(1.0) + 4.0)
    }

    pub fn render(&self) -> String {
        let b = self.bounds();
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.3} {:.3} {:.3} {:.3}" width="{:.0}" height="{:.0}">"#,
            b.min.x,
            b.min.y,
            b.width(),
            b.height(),
            b.width().ceil(),
            b.height().ceil()
        );
        if let Some(g) = self.graph {
            let _ = writeln!(s, r##"<g id="lattice" stroke="#888888" stroke-width="1" fill="#888888">"##);
            for e in &g.edges {
                let (p, q) = (g.position(e.a), g.position(e.b));
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                    p.x.as_f64(),
                    p.y.as_f64(),
                    q.x.as_f64(),
                    q.y.as_f64()
                );
            }
            for n in &g.nodes {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="1.5"/>"#,
                    n.position.x.as_f64(),
                    n.position.y.as_f64()
                );
            }
            s.push_str("</g>\n");
        }
        if let Some(t) = self.target {
            let _ = writeln!(
                s,
                r##"<path id="target" d="{}" fill="none" stroke="#00a000" stroke-width="1.5"/>"##,
                svg_path(t)
            );
        }
        if let Some(c) = self.contour {
            let _ = writeln!(
                s,
                r##"<path id="contour" d="{}" fill="none" stroke="#0050ff" stroke-width="1"/>"##,
                svg_path(c)
            );
        }
        let _ = writeln!(s, r##"<g id="cuts" stroke="#e00000" stroke-width="2">"##);
        for c in self.cuts {
            let (sin, cos) = c.angle_deg.to_radians().sin_cos();
            let h = self.mark_half_len;
            let _ = writeln!(
                s,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                c.x - h * cos,
                c.y - h * sin,
                c.x + h * cos,
                c.y + h * sin
            );
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_format() {
        let p = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.23456, 0.0),
            Point2::new(0.0, 2.0),
        ])
        .unwrap();
        assert_eq!(svg_path(&p), "M0.000 0.000 L1.235 0.000 L0.000 2.000 Z");
    }

    #[test]
    fn cut_stroke_follows_angle() {
        let scene: SvgScene<'_, f64> = SvgScene {
            graph: None,
            target: None,
            contour: None,
            cuts: &[CutMark { x: 10.0, y: 10.0, angle_deg: 90.0 }],
            mark_half_len: 4.0,
        };
        let svg = scene.render();
        assert!(svg.contains(r#"<line x1="10.000" y1="6.000" x2="10.000" y2="14.000"/>"#), "{svg}");
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
