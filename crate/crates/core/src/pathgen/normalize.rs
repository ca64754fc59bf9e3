use crate::covering::{BBox, Covering, MARGIN};
use crate::geom::{circle_horizontal_line_intersections, PathCurve, Point, DEFAULT_TOL};
use crate::oracle::{GridGraph, DEFAULT_PITCH};

use super::{Frame, PathError};
use crate::subcover::build_chain;

const CHORD_EPS: f64 = 1e-12;

/// Grid used to route the endpoint connectors.
#[derive(Debug, Clone, Copy)]
pub struct ConnectorConfig {
    pub pitch: f64,
    /// Half-width of the square window searched around each endpoint.
    pub window: f64,
    pub tol: f64,
}

impl Default for ConnectorConfig {
    fn default() -> Self {
        ConnectorConfig {
            pitch: DEFAULT_PITCH,
            window: 4.0,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Normalized {
    pub frame: Frame,
    /// The covering expressed in the local frame.
    pub local: Covering,
    /// Local abscissae of `A'` and `B'` on the x-axis.
    pub x_a: f64,
    pub x_b: f64,
    pub a_prime: Point,
    pub b_prime: Point,
    /// World-space path from `A` to `A'`.
    pub connector_a: PathCurve,
    /// World-space path from `B'` to `B`.
    pub connector_b: PathCurve,
    pub first_disc: usize,
    pub last_disc: usize,
}

fn local_covering(c: &Covering, frame: &Frame) -> Result<Covering, PathError> {
    let b = c.bbox().expand(MARGIN);
    let corners = [
        Point::new(b.xmin, b.ymin),
        Point::new(b.xmax, b.ymin),
        Point::new(b.xmin, b.ymax),
        Point::new(b.xmax, b.ymax),
    ]
    .map(|p| frame.to_local(p));
    let bbox = BBox::around(&corners, -MARGIN);
    let discs = c.discs().iter().map(|d| frame.local_motion().apply_disc(d)).collect();
    Ok(Covering::new(discs, bbox)?)
}

fn connector(
    c: &Covering,
    from: Point,
    to: Point,
    around: Point,
    which: char,
    cfg: &ConnectorConfig,
) -> Result<PathCurve, PathError> {
    if from.dist(to) <= DEFAULT_TOL {
        return Ok(PathCurve::point(from));
    }
    let window = BBox::around(&[around], cfg.window);
    let route = GridGraph::build(c, window, cfg.pitch, cfg.tol)
        .and_then(|g| g.shortest_path_certified(c, from, to, cfg.tol))
        .map_err(|source| PathError::ConnectorNotFound { which, source })?;
    Ok(PathCurve::polyline(&route.polyline))
}

/// Rotates the problem so `AB` is horizontal and moves the endpoints out to
/// chord ends so that the first and last cover discs end exactly there.
pub fn normalize_endpoints(
    c: &Covering,
    a: Point,
    b: Point,
    cfg: &ConnectorConfig,
) -> Result<Normalized, PathError> {
    if !a.is_finite() || !b.is_finite() || a.dist(b) <= DEFAULT_TOL {
        return Err(PathError::Degenerate);
    }
    for (which, p) in [('A', a), ('B', b)] {
        if c.coverage_count(p, DEFAULT_TOL) < 2 {
            return Err(PathError::NotDoublyCovered { which, x: p.x, y: p.y });
        }
    }
    let frame = Frame::new(a, b);
    let local = local_covering(c, &frame)?;
    let la = frame.to_local(a);
    let lb = frame.to_local(b);

    let chords_through = |p: Point| {
        local
            .discs_containing(p, DEFAULT_TOL)
            .into_iter()
            .filter_map(|k| {
                let pts = circle_horizontal_line_intersections(&local.discs()[k], 0.0);
                (pts.len() == 2).then(|| (k, pts[0].x, pts[1].x))
            })
            .collect::<Vec<_>>()
    };
    // The disc reaching furthest right from A is the one the greedy cover
    // starts with, so A' is its left chord end (and symmetrically for B).
    let (mut first_disc, mut x_a, _) = chords_through(la)
        .into_iter()
        .min_by(|p, q| q.2.total_cmp(&p.2).then(p.0.cmp(&q.0)))
        .ok_or(PathError::NoChord('A'))?;
    let (mut last_disc, _, mut x_b) = chords_through(lb)
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1).then(p.0.cmp(&q.0)))
        .ok_or(PathError::NoChord('B'))?;
    x_a = x_a.min(la.x);
    x_b = x_b.max(lb.x);
    // ties in reach can still hand the cover a disc extending past A'
    for _ in 0..4 {
        let chain = build_chain(&local, 0.0, x_a, x_b)?;
        let (first, last) = (chain.chords[0], chain.chords[chain.len() - 1]);
        if first.a >= x_a - CHORD_EPS && last.b <= x_b + CHORD_EPS {
            break;
        }
        if first.a < x_a - CHORD_EPS {
            x_a = first.a;
            first_disc = first.disc_index;
        }
        if last.b > x_b + CHORD_EPS {
            x_b = last.b;
            last_disc = last.disc_index;
        }
    }
    assert!(x_b - x_a <= lb.x - la.x + 4.0 + 1e-9);

    let a_prime = frame.to_world(Point::new(x_a, 0.0));
    let b_prime = frame.to_world(Point::new(x_b, 0.0));
    let connector_a = connector(c, a, a_prime, a, 'A', cfg)?;
    let connector_b = connector(c, b_prime, b, b, 'B', cfg)?;
    Ok(Normalized {
        frame,
        local,
        x_a,
        x_b,
        a_prime,
        b_prime,
        connector_a,
        connector_b,
        first_disc,
        last_disc,
    })
}
