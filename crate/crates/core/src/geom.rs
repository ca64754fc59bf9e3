//! Planar primitives: points, discs, arcs and mixed segment/arc paths.
//!
//! All membership and incidence predicates take an explicit tolerance.
//! Discs are closed, so a point is inside when its distance to the centre is
//! at most `radius + tol`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance for incidence and chaining checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Discriminants closer than this to zero are treated as exact tangency.
pub const TANGENCY_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("disc radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("concentric equal circles have infinitely many common points")]
    ConcentricEqual,
    #[error("arc sweep must be positive")]
    EmptyArc,
    #[error("path pieces {index} and {next} are not chained (gap {gap:e})")]
    Broken { index: usize, next: usize, gap: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn lerp(&self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    pub fn midpoint(&self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

/// Normalizes an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        if !center.is_finite() || !radius.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if radius <= 0.0 {
            return Err(GeomError::BadRadius(radius));
        }
        Ok(Disc { center, radius })
    }

    pub fn unit(center: Point) -> Self {
        Disc {
            center,
            radius: 1.0,
        }
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.center.dist(p) <= self.radius + tol
    }

    /// Boundary point at polar angle `theta` around the centre.
    pub fn point_at(&self, theta: f64) -> Point {
        Point::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    pub fn angle_of(&self, p: Point) -> f64 {
        normalize_angle((p.y - self.center.y).atan2(p.x - self.center.x))
    }
}

/// Intersections of the boundary of `d` with the horizontal line `y = y0`,
/// sorted by increasing x.
pub fn circle_horizontal_line_intersections(d: &Disc, y0: f64) -> Vec<Point> {
    let dy = y0 - d.center.y;
    let disc = d.radius * d.radius - dy * dy;
    if disc.abs() <= TANGENCY_EPS {
        return vec![Point::new(d.center.x, y0)];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let w = disc.sqrt();
    vec![
        Point::new(d.center.x - w, y0),
        Point::new(d.center.x + w, y0),
    ]
}

/// Common boundary points of two circles, ordered by increasing y (ties by x).
pub fn circle_circle_intersections(d1: &Disc, d2: &Disc) -> Result<Vec<Point>, GeomError> {
    let dx = d2.center.x - d1.center.x;
    let dy = d2.center.y - d1.center.y;
    let dist2 = dx * dx + dy * dy;
    if dist2 == 0.0 {
        if d1.radius == d2.radius {
            return Err(GeomError::ConcentricEqual);
        }
        return Ok(Vec::new());
    }
    let dist = dist2.sqrt();
    let a = (dist2 + d1.radius * d1.radius - d2.radius * d2.radius) / (2.0 * dist);
    let h2 = d1.radius * d1.radius - a * a;
    let (ux, uy) = (dx / dist, dy / dist);
    let base = Point::new(d1.center.x + a * ux, d1.center.y + a * uy);
    if h2.abs() <= TANGENCY_EPS {
        return Ok(vec![base]);
    }
    if h2 < 0.0 {
        return Ok(Vec::new());
    }
    let h = h2.sqrt();
    let p = Point::new(base.x - h * uy, base.y + h * ux);
    let q = Point::new(base.x + h * uy, base.y - h * ux);
    let mut out = vec![p, q];
    out.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
    Ok(out)
}

/// Height of the topmost boundary point of `d` above abscissa `x`, if any.
pub fn upper_arc_height(d: &Disc, x: f64) -> Option<f64> {
    let dx = x - d.center.x;
    if dx.abs() > d.radius {
        return None;
    }
    Some(d.center.y + (d.radius * d.radius - dx * dx).max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Ccw,
    Cw,
}

/// A circular arc traversed from `start_angle` to `end_angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPiece {
    pub disc: Disc,
    pub start_angle: f64,
    pub end_angle: f64,
    pub orientation: Orientation,
}

impl ArcPiece {
    pub fn new(
        disc: Disc,
        start_angle: f64,
        end_angle: f64,
        orientation: Orientation,
    ) -> Result<Self, GeomError> {
        if !start_angle.is_finite() || !end_angle.is_finite() {
            return Err(GeomError::NonFinite);
        }
        Ok(ArcPiece {
            disc,
            start_angle: normalize_angle(start_angle),
            end_angle: normalize_angle(end_angle),
            orientation,
        })
    }

    /// Arc of `disc` from boundary point `from` to boundary point `to`.
    /// Returns `None` when the two points coincide (angularly) within `eps`.
    pub fn between(disc: Disc, from: Point, to: Point, orientation: Orientation) -> Option<Self> {
        let a = disc.angle_of(from);
        let b = disc.angle_of(to);
        let arc = ArcPiece {
            disc,
            start_angle: a,
            end_angle: b,
            orientation,
        };
        let s = arc.sweep();
        if s <= 1e-12 || s >= TAU - 1e-12 {
            return None;
        }
        Some(arc)
    }

    /// Angular sweep in `(0, 2π]`.
    pub fn sweep(&self) -> f64 {
        let raw = match self.orientation {
            Orientation::Ccw => self.end_angle - self.start_angle,
            Orientation::Cw => self.start_angle - self.end_angle,
        };
        let s = raw.rem_euclid(TAU);
        if s == 0.0 {
            TAU
        } else {
            s
        }
    }

    pub fn length(&self) -> f64 {
        self.disc.radius * self.sweep()
    }

    pub fn start(&self) -> Point {
        self.disc.point_at(self.start_angle)
    }

    pub fn end(&self) -> Point {
        self.disc.point_at(self.end_angle)
    }

    /// Point at fraction `t ∈ [0, 1]` of the sweep.
    pub fn point_at(&self, t: f64) -> Point {
        let signed = match self.orientation {
            Orientation::Ccw => self.sweep(),
            Orientation::Cw => -self.sweep(),
        };
        self.disc.point_at(self.start_angle + signed * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Segment { from: Point, to: Point },
    Arc(ArcPiece),
}

impl Piece {
    pub fn start(&self) -> Point {
        match self {
            Piece::Segment { from, .. } => *from,
            Piece::Arc(a) => a.start(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Piece::Segment { to, .. } => *to,
            Piece::Arc(a) => a.end(),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Piece::Segment { from, to } => from.dist(*to),
            Piece::Arc(a) => a.length(),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Piece::Segment { from, to } => from.lerp(*to, t),
            Piece::Arc(a) => a.point_at(t),
        }
    }
}

/// An ordered chain of segments and arcs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathCurve {
    pub pieces: Vec<Piece>,
}

impl PathCurve {
    pub fn new() -> Self {
        PathCurve { pieces: Vec::new() }
    }

    pub fn from_pieces(pieces: Vec<Piece>) -> Self {
        PathCurve { pieces }
    }

    /// A zero-length path sitting at `p`.
    pub fn point(p: Point) -> Self {
        PathCurve {
            pieces: vec![Piece::Segment { from: p, to: p }],
        }
    }

    /// Straight polyline through `points`; consecutive duplicates are skipped.
    pub fn polyline(points: &[Point]) -> Self {
        let mut pieces = Vec::new();
        for w in points.windows(2) {
            if w[0] != w[1] {
                pieces.push(Piece::Segment {
                    from: w[0],
                    to: w[1],
                });
            }
        }
        if pieces.is_empty() {
            if let Some(&p) = points.first() {
                return PathCurve::point(p);
            }
        }
        PathCurve { pieces }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn push_segment(&mut self, from: Point, to: Point) {
        self.pieces.push(Piece::Segment { from, to });
    }

    pub fn push_arc(&mut self, arc: ArcPiece) {
        self.pieces.push(Piece::Arc(arc));
    }

    pub fn extend(&mut self, other: PathCurve) {
        self.pieces.extend(other.pieces);
    }

    pub fn start(&self) -> Option<Point> {
        self.pieces.first().map(Piece::start)
    }

    pub fn end(&self) -> Option<Point> {
        self.pieces.last().map(Piece::end)
    }

    /// Largest gap between the end of one piece and the start of the next.
    pub fn max_gap(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| w[0].end().dist(w[1].start()))
            .fold(0.0, f64::max)
    }

    pub fn check_chained(&self, tol: f64) -> Result<(), GeomError> {
        for (index, w) in self.pieces.windows(2).enumerate() {
            let gap = w[0].end().dist(w[1].start());
            if !(gap <= tol) {
                return Err(GeomError::Broken {
                    index,
                    next: index + 1,
                    gap,
                });
            }
        }
        Ok(())
    }

    /// Exact length: segment lengths plus `radius · sweep` for each arc.
    pub fn length(&self) -> Result<f64, GeomError> {
        self.check_chained(DEFAULT_TOL)?;
        Ok(self.pieces.iter().map(Piece::length).sum())
    }

    /// Samples every piece at arc-length pitch at most `spacing`, including
    /// both endpoints of each piece.
    pub fn sample(&self, spacing: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            let n = ((piece.length() / spacing).ceil() as usize).max(1);
            for k in 0..=n {
                out.push(piece.point_at(k as f64 / n as f64));
            }
        }
        out
    }

    pub fn transformed(&self, motion: &RigidMotion) -> PathCurve {
        PathCurve {
            pieces: self.pieces.iter().map(|p| motion.apply_piece(p)).collect(),
        }
    }
}

/// Orientation-preserving rigid motion `p ↦ R(angle)·p + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub angle: f64,
    pub shift: Point,
    cos: f64,
    sin: f64,
}

impl RigidMotion {
    pub fn new(angle: f64, shift: Point) -> Self {
        RigidMotion {
            angle,
            shift,
            cos: angle.cos(),
            sin: angle.sin(),
        }
    }

    pub fn identity() -> Self {
        Self::new(0.0, Point::new(0.0, 0.0))
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.cos * p.x - self.sin * p.y + self.shift.x,
            self.sin * p.x + self.cos * p.y + self.shift.y,
        )
    }

    pub fn inverse(&self) -> RigidMotion {
        // p = R^T (q - shift)
        let back = Point::new(
            -(self.cos * self.shift.x + self.sin * self.shift.y),
            self.sin * self.shift.x - self.cos * self.shift.y,
        );
        RigidMotion {
            angle: -self.angle,
            shift: back,
            cos: self.cos,
            sin: -self.sin,
        }
    }

    pub fn apply_disc(&self, d: &Disc) -> Disc {
        Disc {
            center: self.apply(d.center),
            radius: d.radius,
        }
    }

    pub fn apply_arc(&self, a: &ArcPiece) -> ArcPiece {
        ArcPiece {
            disc: self.apply_disc(&a.disc),
            start_angle: normalize_angle(a.start_angle + self.angle),
            end_angle: normalize_angle(a.end_angle + self.angle),
            orientation: a.orientation,
        }
    }

    pub fn apply_piece(&self, p: &Piece) -> Piece {
        match p {
            Piece::Segment { from, to } => Piece::Segment {
                from: self.apply(*from),
                to: self.apply(*to),
            },
            Piece::Arc(a) => Piece::Arc(self.apply_arc(a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn line_intersections() {
        let d = Disc::unit(Point::new(0.0, 0.0));
        let pts = circle_horizontal_line_intersections(&d, 0.0);
        assert_eq!(pts, vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]);

        let pts = circle_horizontal_line_intersections(&d, 1.0);
        assert_eq!(pts, vec![Point::new(0.0, 1.0)]);

        let d = Disc::unit(Point::new(2.0, 0.6));
        let pts = circle_horizontal_line_intersections(&d, 0.0);
        assert_eq!(pts.len(), 2);
        assert!(close(pts[0].x, 1.2) && close(pts[1].x, 2.8));

        assert!(circle_horizontal_line_intersections(&d, 5.0).is_empty());
    }

    #[test]
    fn circle_intersections() {
        let a = Disc::unit(Point::new(0.0, 0.0));
        let pts = circle_circle_intersections(&a, &Disc::unit(Point::new(1.0, 0.0))).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert_eq!(pts.len(), 2);
        assert!(close(pts[0].x, 0.5) && close(pts[0].y, -h));
        assert!(close(pts[1].x, 0.5) && close(pts[1].y, h));

        let pts = circle_circle_intersections(&a, &Disc::unit(Point::new(2.0, 0.0))).unwrap();
        assert_eq!(pts, vec![Point::new(1.0, 0.0)]);

        let pts = circle_circle_intersections(&a, &Disc::unit(Point::new(3.0, 0.0))).unwrap();
        assert!(pts.is_empty());

        assert_eq!(
            circle_circle_intersections(&a, &a),
            Err(GeomError::ConcentricEqual)
        );
    }

    #[test]
    fn arc_heights() {
        let d = Disc::unit(Point::new(0.0, -0.5));
        assert!(close(upper_arc_height(&d, 0.0).unwrap(), 0.5));
        assert!(close(upper_arc_height(&d, 0.8).unwrap(), 0.1));
        assert_eq!(upper_arc_height(&Disc::unit(Point::new(0.0, 0.0)), 2.0), None);
    }

    #[test]
    fn path_lengths() {
        let p = PathCurve::polyline(&[Point::new(0.0, 0.0), Point::new(3.0, 4.0)]);
        assert!(close(p.length().unwrap(), 5.0));

        let semi = ArcPiece::new(Disc::unit(Point::new(0.0, 0.0)), PI, 0.0, Orientation::Cw).unwrap();
        let p = PathCurve::from_pieces(vec![Piece::Arc(semi)]);
        assert!(close(p.length().unwrap(), PI));

        let mut p = PathCurve::new();
        p.push_segment(Point::new(0.0, 0.0), Point::new(0.0, 1.0));
        p.push_arc(
            ArcPiece::new(Disc::unit(Point::new(1.0, 1.0)), PI, PI / 2.0, Orientation::Cw).unwrap(),
        );
        assert!(close(p.length().unwrap(), 1.0 + PI / 2.0));
        // the same quarter circle traversed CCW sweeps the other three quarters
        let ccw = ArcPiece::new(Disc::unit(Point::new(1.0, 1.0)), PI, PI / 2.0, Orientation::Ccw).unwrap();
        assert!(close(ccw.length(), 1.5 * PI));
    }

    #[test]
    fn broken_chain_is_an_error() {
        let mut p = PathCurve::new();
        p.push_segment(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        p.push_segment(Point::new(1.0, 0.1), Point::new(2.0, 0.0));
        assert!(matches!(p.length(), Err(GeomError::Broken { index: 0, .. })));
    }

    #[test]
    fn angles_normalize_into_half_open_range() {
        assert_eq!(normalize_angle(-PI), PI);
        assert_eq!(normalize_angle(PI), PI);
        assert!(close(normalize_angle(3.0 * PI / 2.0), -PI / 2.0));
        let lower = ArcPiece::new(Disc::unit(Point::new(0.0, 0.0)), -PI, -PI / 2.0, Orientation::Ccw).unwrap();
        assert!(close(lower.sweep(), PI / 2.0));
    }

    #[test]
    fn motion_inverse_round_trips() {
        let m = RigidMotion::new(0.7, Point::new(3.0, -2.0));
        let p = Point::new(1.25, 8.5);
        let q = m.inverse().apply(m.apply(p));
        assert!(p.dist(q) < 1e-12);
    }

    fn random_path() -> impl Strategy<Value = PathCurve> {
        prop::collection::vec(
            (
                any::<bool>(),
                -5.0..5.0f64,
                -5.0..5.0f64,
                0.2..2.0f64,
                0.1..3.0f64,
                any::<bool>(),
            ),
            1..8,
        )
        .prop_map(|steps| {
            let mut path = PathCurve::new();
            let mut cur = Point::new(0.0, 0.0);
            for (is_arc, dx, dy, r, sweep, ccw) in steps {
                if is_arc {
                    // start on a circle whose centre sits at angle (dx) from cur
                    let theta = dx;
                    let center = Point::new(cur.x - r * theta.cos(), cur.y - r * theta.sin());
                    let disc = Disc::new(center, r).unwrap();
                    let (end, o) = if ccw {
                        (theta + sweep, Orientation::Ccw)
                    } else {
                        (theta - sweep, Orientation::Cw)
                    };
                    let arc = ArcPiece::new(disc, theta, end, o).unwrap();
                    cur = arc.end();
                    path.push_arc(arc);
                } else {
                    let next = Point::new(cur.x + dx, cur.y + dy);
                    path.push_segment(cur, next);
                    cur = next;
                }
            }
            path
        })
    }

    proptest! {
        #[test]
        fn line_hits_satisfy_circle_equation(cx in -10.0..10.0f64, cy in -10.0..10.0f64,
                                              r in 0.1..3.0f64, y0 in -12.0..12.0f64) {
            let d = Disc::new(Point::new(cx, cy), r).unwrap();
            let pts = circle_horizontal_line_intersections(&d, y0);
            for w in pts.windows(2) {
                prop_assert!(w[0].x < w[1].x);
            }
            for p in pts {
                // tangency rounding may move the point by up to sqrt(1e-12)
                let slack = if (y0 - cy).abs() > r - 1e-6 { 1e-6 } else { 1e-9 };
                prop_assert!((d.center.dist(p) - r).abs() <= slack);
            }
        }

        #[test]
        fn circle_hits_lie_on_both_and_are_symmetric(
            x1 in -3.0..3.0f64, y1 in -3.0..3.0f64, r1 in 0.2..2.0f64,
            x2 in -3.0..3.0f64, y2 in -3.0..3.0f64, r2 in 0.2..2.0f64,
        ) {
            let a = Disc::new(Point::new(x1, y1), r1).unwrap();
            let b = Disc::new(Point::new(x2, y2), r2).unwrap();
            prop_assume!(a.center.dist(b.center) > 1e-6);
            let ab = circle_circle_intersections(&a, &b).unwrap();
            let ba = circle_circle_intersections(&b, &a).unwrap();
            prop_assert_eq!(ab.len(), ba.len());
            if ab.len() == 2 {
                for p in &ab {
                    prop_assert!((a.center.dist(*p) - r1).abs() <= 1e-9);
                    prop_assert!((b.center.dist(*p) - r2).abs() <= 1e-9);
                }
                for (p, q) in ab.iter().zip(ba.iter()) {
                    prop_assert!(p.dist(*q) <= 1e-9);
                }
            }
        }

        #[test]
        fn upper_height_is_concave(cx in -2.0..2.0f64, cy in -2.0..2.0f64,
                                    t1 in 0.0..1.0f64, t2 in 0.0..1.0f64) {
            let d = Disc::unit(Point::new(cx, cy));
            let x1 = cx - 1.0 + 2.0 * t1;
            let x2 = cx - 1.0 + 2.0 * t2;
            let m = upper_arc_height(&d, 0.5 * (x1 + x2)).unwrap();
            let avg = 0.5 * (upper_arc_height(&d, x1).unwrap() + upper_arc_height(&d, x2).unwrap());
            prop_assert!(m >= avg - 1e-12);
        }

        #[test]
        fn length_is_additive_and_rigid_invariant(p in random_path(), q in random_path(),
                                                   angle in -PI..PI, tx in -50.0..50.0f64,
                                                   ty in -50.0..50.0f64) {
            let lp = p.length().unwrap();
            let lq = q.length().unwrap();
            // translate q so it starts where p ends
            let end = p.end().unwrap();
            let start = q.start().unwrap();
            let q = q.transformed(&RigidMotion::new(0.0, Point::new(end.x - start.x, end.y - start.y)));
            let mut joined = p.clone();
            joined.extend(q);
            let lj = joined.length().unwrap();
            prop_assert!((lj - (lp + lq)).abs() <= 1e-9);

            let moved = joined.transformed(&RigidMotion::new(angle, Point::new(tx, ty)));
            prop_assert!((moved.length().unwrap() - lj).abs() <= 1e-9);
        }
    }
}
