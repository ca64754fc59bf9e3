use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::{golden_section_max, BoundsError};
use crate::geom::{normalize_angle, Point};

/// Slack allowed when deciding that an endpoint lies outside the other disc.
const OUTSIDE_TOL: f64 = 1e-9;

/// Two unit circles `C1` centred at the origin and `C2` centred at `(t, 0)`,
/// with `A` on `∂C1` and `B` on `∂C2`, each given by its angle about its own
/// centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoCircleConfig {
    pub t: f64,
    pub theta_a: f64,
    pub theta_b: f64,
}

impl TwoCircleConfig {
    pub fn new(t: f64, theta_a: f64, theta_b: f64) -> Self {
        TwoCircleConfig { t, theta_a, theta_b }
    }

    pub fn a(&self) -> Point {
        Point::new(self.theta_a.cos(), self.theta_a.sin())
    }

    pub fn b(&self) -> Point {
        Point::new(self.t + self.theta_b.cos(), self.theta_b.sin())
    }

    pub fn c2(&self) -> Point {
        Point::new(self.t, 0.0)
    }

    /// Upper and lower crossings of the two circles.
    pub fn corners(&self) -> (Point, Point) {
        let x = 0.5 * self.t;
        let y = (1.0 - x * x).max(0.0).sqrt();
        (Point::new(x, y), Point::new(x, -y))
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        if !(self.t > 0.0 && self.t < 2.0) {
            return Err(BoundsError::BadDistance(self.t));
        }
        if self.a().dist(self.c2()) < 1.0 - OUTSIDE_TOL {
            return Err(BoundsError::EndpointInside('A'));
        }
        if self.b().dist(Point::new(0.0, 0.0)) < 1.0 - OUTSIDE_TOL {
            return Err(BoundsError::EndpointInside('B'));
        }
        Ok(())
    }

    /// Whether the straight segment `AB` lies in `C1 ∪ C2`.
    pub fn segment_covered(&self) -> bool {
        let mut spans = [self.segment_interval(Point::new(0.0, 0.0)), self.segment_interval(self.c2())]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>();
        spans.sort_by(|p, q| p.0.total_cmp(&q.0));
        let eps = 1e-12;
        let mut reach = 0.0;
        for (lo, hi) in spans {
            if lo > reach + eps {
                return false;
            }
            reach = f64::max(reach, hi);
        }
        reach >= 1.0 - eps
    }

    /// Parameters `s ∈ [0, 1]` where `A + s(B − A)` lies in the unit disc at `c`.
    fn segment_interval(&self, c: Point) -> Option<(f64, f64)> {
        let (a, b) = (self.a(), self.b());
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let (fx, fy) = (a.x - c.x, a.y - c.y);
        let qa = dx * dx + dy * dy;
        let qb = 2.0 * (fx * dx + fy * dy);
        let qc = fx * fx + fy * fy - 1.0;
        let disc = qb * qb - 4.0 * qa * qc;
        if qa == 0.0 || disc < 0.0 {
            return None;
        }
        let r = disc.sqrt();
        let lo = ((-qb - r) / (2.0 * qa)).max(0.0);
        let hi = ((-qb + r) / (2.0 * qa)).min(1.0);
        (lo <= hi).then_some((lo, hi))
    }
}

/// Length of the shorter arc of a unit circle between two angles.
pub fn shorter_arc(from: f64, to: f64) -> f64 {
    normalize_angle(to - from).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoCircleShortest {
    pub length: f64,
    /// 1-based index into `candidates`: (up, up), (up, down), (down, up),
    /// (down, down) for the corners where the path enters and leaves the lens.
    pub choice: usize,
    pub candidates: [f64; 4],
}

pub fn two_circle_shortest(cfg: &TwoCircleConfig) -> Result<TwoCircleShortest, BoundsError> {
    cfg.validate()?;
    let phi = (0.5 * cfg.t).acos();
    let (up, down) = cfg.corners();
    let chord = up.dist(down);
    // corner angles about C1 and about C2
    let on_c1 = [phi, -phi];
    let on_c2 = [PI - phi, -(PI - phi)];
    let mut candidates = [0.0; 4];
    for p in 0..2 {
        for q in 0..2 {
            let cross = if p == q { 0.0 } else { chord };
            candidates[2 * p + q] =
                shorter_arc(cfg.theta_a, on_c1[p]) + cross + shorter_arc(on_c2[q], cfg.theta_b);
        }
    }
    let (idx, &length) = candidates
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1).then(x.0.cmp(&y.0)))
        .expect("four candidates");
    Ok(TwoCircleShortest {
        length,
        choice: idx + 1,
        candidates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstPair {
    pub config: TwoCircleConfig,
    pub length: f64,
    pub distance: f64,
    pub ratio: f64,
}

/// Box coordinates `(t, u, v) ∈ (0, 2) × [0, 1]²` for configurations with
/// `A` outside `C2` and `B` outside `C1`.
fn config_from_box(t: f64, u: f64, v: f64) -> TwoCircleConfig {
    let phi = (0.5 * t).acos();
    let theta_a = phi + u * (TAU - 2.0 * phi);
    let theta_b = -(PI - phi) + v * 2.0 * (PI - phi);
    TwoCircleConfig::new(t, normalize_angle(theta_a), normalize_angle(theta_b))
}

fn objective(x: [f64; 3]) -> f64 {
    let cfg = config_from_box(x[0], x[1], x[2]);
    if !cfg.segment_covered() {
        return f64::NEG_INFINITY;
    }
    let d = cfg.a().dist(cfg.b());
    match two_circle_shortest(&cfg) {
        Ok(s) if d > 1e-9 => s.length / d,
        _ => f64::NEG_INFINITY,
    }
}

const T_MIN: f64 = 1e-3;
const T_MAX: f64 = 2.0 - 1e-3;
/// Half-width, in box coordinates, of the nested refinement brackets.
const NEST_WIDTH: f64 = 0.1;
const BOX: [(f64, f64); 3] = [(T_MIN, T_MAX), (0.0, 1.0), (0.0, 1.0)];

/// Maximizes shortest length over `|AB|` among configurations where the
/// segment `AB` itself is covered by the two discs.
///
/// Coarse grid over the box coordinates, then cycles of coordinate-wise
/// golden-section search with brackets halving each cycle, then a nested
/// golden-section search around the best point.
pub fn two_circle_worst_ratio(coarse_step: f64, refine_iters: usize) -> WorstPair {
    let axis = |lo: f64, hi: f64| {
        let n = ((hi - lo) / coarse_step).ceil().max(1.0) as usize;
        (0..=n).map(move |i| lo + (hi - lo) * i as f64 / n as f64)
    };
    let mut best = ([1.0, 0.5, 0.5], f64::NEG_INFINITY);
    for t in axis(T_MIN, T_MAX) {
        for u in axis(0.0, 1.0) {
            for v in axis(0.0, 1.0) {
                let val = objective([t, u, v]);
                if val > best.1 {
                    best = ([t, u, v], val);
                }
            }
        }
    }

    let mut width = coarse_step;
    for _ in 0..12 {
        for k in 0..3 {
            let (lo, hi) = BOX[k];
            let (a, b) = ((best.0[k] - width).max(lo), (best.0[k] + width).min(hi));
            let base = best.0;
            let f = |s: f64| {
                let mut x = base;
                x[k] = s;
                objective(x)
            };
            let (s, val) = golden_section_max(f, a, b, refine_iters);
            if val > best.1 {
                best.0[k] = s;
                best.1 = val;
            }
        }
        width *= 0.5;
    }

    // At the optimum several candidates tie and the maximum sits on a ridge
    // that axis-aligned moves cannot follow. Nesting the searches (v for
    // fixed t and u, then u for fixed t, then t) only needs each slice to be
    // unimodal, which holds across a tie.
    let around = |k: usize, c: f64| ((c - NEST_WIDTH).max(BOX[k].0), (c + NEST_WIDTH).min(BOX[k].1));
    let centre = best.0;
    let inner = |t: f64, u: f64| {
        let (lo, hi) = around(2, centre[2]);
        golden_section_max(|v| objective([t, u, v]), lo, hi, refine_iters)
    };
    let middle = |t: f64| {
        let (lo, hi) = around(1, centre[1]);
        golden_section_max(|u| inner(t, u).1, lo, hi, refine_iters)
    };
    let (lo, hi) = around(0, centre[0]);
    let (t, val) = golden_section_max(|t| middle(t).1, lo, hi, refine_iters);
    if val > best.1 {
        let (u, _) = middle(t);
        let (v, _) = inner(t, u);
        best = ([t, u, v], objective([t, u, v]));
    }

    let config = config_from_box(best.0[0], best.0[1], best.0[2]);
    let length = two_circle_shortest(&config).map(|s| s.length).unwrap_or(f64::NAN);
    let distance = config.a().dist(config.b());
    WorstPair {
        config,
        length,
        distance,
        ratio: best.1,
    }
}
