//! Construction of the doubly covered path between two points.
//!
//! Everything here works in a frame where the segment `AB` lies on the x-axis
//! with `A` to the left. A path is built run by run: a maximal block of
//! consecutive chain discs whose minor caps lie on the same side of the line
//! contributes a vertical climb, the outer envelope of those caps, and a
//! vertical descent back to the line.

mod envelope;
mod normalize;

use serde::Serialize;
use thiserror::Error;

pub use envelope::{envelope, envelope_height};
pub use normalize::{normalize_endpoints, ConnectorConfig, Normalized};

use crate::covering::Covering;
use crate::geom::{ArcPiece, Disc, Orientation, PathCurve, Point, RigidMotion};
use crate::oracle::OracleError;
use crate::subcover::{build_chain, Side, SubcoverChain, SubcoverError};

/// Verticals shorter than this are dropped.
pub const MIN_VERTICAL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("endpoints coincide")]
    Degenerate,
    #[error("endpoint {which} at ({x}, {y}) is not doubly covered")]
    NotDoublyCovered { which: char, x: f64, y: f64 },
    #[error("no disc cuts a proper chord through endpoint {0}")]
    NoChord(char),
    #[error("no doubly covered connector for endpoint {which}: {source}")]
    ConnectorNotFound {
        which: char,
        #[source]
        source: OracleError,
    },
    #[error(transparent)]
    Subcover(#[from] SubcoverError),
    #[error("covering: {0}")]
    Covering(#[from] crate::covering::CoveringError),
}

/// Rigid motion taking `A` to the origin and `B` onto the positive x-axis.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    to_local: RigidMotion,
    to_world: RigidMotion,
}

impl Frame {
    pub fn new(a: Point, b: Point) -> Self {
        let theta = (b.y - a.y).atan2(b.x - a.x);
        let rot = RigidMotion::new(-theta, Point::new(0.0, 0.0));
        let shifted = rot.apply(a);
        let to_local = RigidMotion::new(-theta, Point::new(-shifted.x, -shifted.y));
        Frame {
            to_local,
            to_world: to_local.inverse(),
        }
    }

    pub fn to_local(&self, p: Point) -> Point {
        self.to_local.apply(p)
    }

    pub fn to_world(&self, p: Point) -> Point {
        self.to_world.apply(p)
    }

    pub fn local_motion(&self) -> &RigidMotion {
        &self.to_local
    }

    pub fn world_motion(&self) -> &RigidMotion {
        &self.to_world
    }
}

/// Chords `start .. start + k` (0-based) with caps on `side`; the run spans
/// milestones `start ..= start + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Run {
    pub start: usize,
    pub k: usize,
    pub side: Side,
}

pub fn build_runs(chain: &SubcoverChain) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for (i, &side) in chain.sides.iter().enumerate() {
        match runs.last_mut() {
            Some(r) if r.side == side => r.k += 1,
            _ => runs.push(Run { start: i, k: 1, side }),
        }
    }
    runs
}

/// Signed height of disc `d`'s boundary on its cap side, relative to the
/// line, at abscissa `x`.
pub(crate) fn cap_height(d: &Disc, line_y: f64, side: Side, x: f64) -> f64 {
    let s = side.sign();
    let mirrored = s * (d.center.y - line_y);
    let dx = x - d.center.x;
    let h = mirrored + (d.radius * d.radius - dx * dx).max(0.0).sqrt();
    s * h
}

pub(crate) fn cap_orientation(side: Side) -> Orientation {
    // moving right along the top of a disc is clockwise
    match side {
        Side::Above => Orientation::Cw,
        Side::Below => Orientation::Ccw,
    }
}

/// The path from `(M_0, y0)` to `(M_n, y0)` along with its runs.
pub fn build_gamma(chain: &SubcoverChain) -> (PathCurve, Vec<Run>) {
    let runs = build_runs(chain);
    let y0 = chain.line_y;
    let mut path = PathCurve::new();
    for run in &runs {
        let xs = chain.milestones[run.start];
        let xe = chain.milestones[run.start + run.k];
        let first = &chain.discs[run.start];
        let last = &chain.discs[run.start + run.k - 1];
        let hs = cap_height(first, y0, run.side, xs);
        let he = cap_height(last, y0, run.side, xe);
        let top_s = Point::new(xs, y0 + hs);
        let top_e = Point::new(xe, y0 + he);
        if hs.abs() >= MIN_VERTICAL {
            path.push_segment(Point::new(xs, y0), top_s);
        }
        for arc in envelope(chain, run, xs, xe) {
            path.push_arc(arc);
        }
        if he.abs() >= MIN_VERTICAL {
            path.push_segment(top_e, Point::new(xe, y0));
        }
    }
    if path.is_empty() {
        path = PathCurve::point(Point::new(chain.x_a, y0));
    }
    (path, runs)
}

/// The comparison path for one chain disc: up from `M_{i-1}` to the cap,
/// along the cap boundary, and down to `M_i`.
#[derive(Debug, Clone)]
pub struct GammaPiece {
    /// 0-based chord index.
    pub index: usize,
    pub curve: PathCurve,
    pub length: f64,
    /// Angle at the centre between the climb point and the left chord end.
    pub alpha: f64,
    /// Angle at the centre between the right chord end and the descent point.
    pub beta: f64,
    pub c_point: Point,
    pub d_point: Point,
    pub span: f64,
}

fn angle_between(o: Point, p: Point, q: Point) -> f64 {
    let (ux, uy) = (p.x - o.x, p.y - o.y);
    let (vx, vy) = (q.x - o.x, q.y - o.y);
    (ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy)
}

pub fn build_gamma_pieces(chain: &SubcoverChain) -> Vec<GammaPiece> {
    let y0 = chain.line_y;
    (0..chain.len())
        .map(|i| {
            let d = chain.discs[i];
            let side = chain.sides[i];
            let xl = chain.milestones[i];
            let xr = chain.milestones[i + 1];
            let c_point = Point::new(xl, y0 + cap_height(&d, y0, side, xl));
            let d_point = Point::new(xr, y0 + cap_height(&d, y0, side, xr));
            let mut curve = PathCurve::new();
            if (c_point.y - y0).abs() >= MIN_VERTICAL {
                curve.push_segment(Point::new(xl, y0), c_point);
            }
            if let Some(arc) = ArcPiece::between(d, c_point, d_point, cap_orientation(side)) {
                curve.push_arc(arc);
            } else {
                curve.push_segment(c_point, d_point);
            }
            if (d_point.y - y0).abs() >= MIN_VERTICAL {
                curve.push_segment(d_point, Point::new(xr, y0));
            }
            let length = curve.pieces.iter().map(|p| p.length()).sum();
            let chord = chain.chords[i];
            let alpha = angle_between(d.center, c_point, Point::new(chord.a, y0));
            let beta = angle_between(d.center, Point::new(chord.b, y0), d_point);
            GammaPiece {
                index: i,
                curve,
                length,
                alpha,
                beta,
                c_point,
                d_point,
                span: xr - xl,
            }
        })
        .collect()
}

/// All artifacts of one construction, in the local frame unless noted.
#[derive(Debug, Clone)]
pub struct Construction {
    pub normalized: Normalized,
    pub chain: SubcoverChain,
    pub runs: Vec<Run>,
    pub gamma: PathCurve,
    /// `gamma` mapped back to the input coordinates.
    pub gamma_world: PathCurve,
    pub pieces: Vec<GammaPiece>,
}

impl Construction {
    pub fn frame(&self) -> &Frame {
        &self.normalized.frame
    }
}

/// Normalizes the endpoints, builds the chain, the path and its pieces.
pub fn construct(c: &Covering, a: Point, b: Point, cfg: &ConnectorConfig) -> Result<Construction, PathError> {
    let normalized = normalize_endpoints(c, a, b, cfg)?;
    let chain = build_chain(&normalized.local, 0.0, normalized.x_a, normalized.x_b)?;
    let (gamma, runs) = build_gamma(&chain);
    let pieces = build_gamma_pieces(&chain);
    let gamma_world = gamma.transformed(normalized.frame.world_motion());
    Ok(Construction {
        normalized,
        chain,
        runs,
        gamma,
        gamma_world,
        pieces,
    })
}
