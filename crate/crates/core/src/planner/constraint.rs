use super::CutCandidate;
use crate::geometry::{perpendicular_angle, PlaneAngle};
use crate::{LatticeGraph, Point2, Scalar, Segment};

/// A cut that respects the node clearance rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint<T> {
    /// Index into `graph.edges`.
    pub edge: usize,
    pub point: Point2<T>,
    /// Position along the edge, within `[offset, 1 - offset]`.
    pub t: T,
    /// Blade plane, perpendicular to the edge.
    pub angle: PlaneAngle<T>,
    /// The raw crossing lay outside the allowed band and was moved onto it.
    pub clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffsetMode {
    /// Move out-of-band crossings onto the nearest band limit.
    #[default]
    Clamp,
    /// Drop out-of-band crossings.
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rejection<T> {
    ZeroLengthEdge { edge: usize },
    OutsideBand { edge: usize, t: T },
}

/// Enforces the clearance rule: the cut must sit at least `offset_coeff` of
/// the edge length from the nearer node, i.e. `t in [c, 1 - c]`. The blade
/// angle is the plane perpendicular to the edge direction.
pub fn enforce_offset_constraint<T: Scalar>(
    c: &CutCandidate<T>,
    graph: &LatticeGraph<T>,
    offset_coeff: T,
    mode: OffsetMode,
) -> Result<CutPoint<T>, Rejection<T>> {
    let e = graph.edges[c.edge];
    let seg = Segment::new(graph.position(e.a), graph.position(e.b))
        .map_err(|_| Rejection::ZeroLengthEdge { edge: c.edge })?;
    let lo = offset_coeff;
    let hi = T::one() - offset_coeff;
    let inside = c.t >= lo && c.t <= hi;
    let t = match (inside, mode) {
        (true, _) => c.t,
        (false, OffsetMode::Clamp) => c.t.max(lo).min(hi),
        (false, OffsetMode::Reject) => return Err(Rejection::OutsideBand { edge: c.edge, t: c.t }),
    };
    Ok(CutPoint {
        edge: c.edge,
        point: if inside { c.point } else { seg.at(t) },
        t,
        angle: perpendicular_angle(seg.direction_degrees()),
        clamped: !inside,
    })
}
