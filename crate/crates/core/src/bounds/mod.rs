//! Closed-form per-disc length bound and its numerical maximization, plus
//! the restricted two-circle problem.
//!
//! For a disc of unit radius centred on the line, with the climb point at
//! angle `α` from the left chord end and the descent point at angle `β` from
//! the right chord end, the per-disc path has length
//! `sin α + sin β + π − α − β` over a milestone span of `cos α + cos β`.
//! Milestones are at least half a chord apart, which for the normalized
//! circle reads `cos α + cos β ≥ 1`; on that region the worst ratio is
//! `π/3 + √3`, attained at `α = β = π/3`. Without the constraint the ratio
//! is unbounded near `α = β = π/2`.

mod golden;
mod two_circle;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use thiserror::Error;

pub use golden::golden_section_max;
pub use two_circle::{
    shorter_arc, two_circle_shortest, two_circle_worst_ratio, TwoCircleConfig, TwoCircleShortest, WorstPair,
};

use crate::pathgen::GammaPiece;

/// Inset keeping searches away from the zero-span corner.
pub const CORNER_INSET: f64 = 1e-6;
pub const DEFAULT_REFINE_ITERS: usize = 60;
/// Spans below this are reported as the infinite-ratio sentinel.
const ZERO_SPAN: f64 = 1e-12;
/// Smallest span a normalized piece can have: half its chord, the radius.
pub const MIN_SPAN: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("angle {0} outside [0, π/2]")]
    Domain(f64),
    #[error("circle distance {0} outside (0, 2)")]
    BadDistance(f64),
    #[error("endpoint {0} lies inside the other circle")]
    EndpointInside(char),
}

/// `π/3 + √3`.
pub fn theorem_constant() -> f64 {
    PI / 3.0 + 3f64.sqrt()
}

fn gamma_len(alpha: f64, beta: f64) -> f64 {
    (alpha.sin() + beta.sin()) + (PI - (alpha + beta))
}

fn span(alpha: f64, beta: f64) -> f64 {
    alpha.cos() + beta.cos()
}

fn quotient(len: f64, span: f64) -> f64 {
    if span <= ZERO_SPAN {
        f64::INFINITY
    } else {
        len / span
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_len: f64,
    pub span: f64,
    pub ratio: f64,
}

fn check_angle(a: f64) -> Result<(), BoundsError> {
    if (0.0..=FRAC_PI_2).contains(&a) {
        Ok(())
    } else {
        Err(BoundsError::Domain(a))
    }
}

/// Whether `(α, β)` satisfies the milestone spacing constraint.
pub fn feasible(alpha: f64, beta: f64) -> bool {
    span(alpha, beta) >= MIN_SPAN
}

pub fn ratio(alpha: f64, beta: f64) -> Result<RatioPoint, BoundsError> {
    check_angle(alpha)?;
    check_angle(beta)?;
    let g = gamma_len(alpha, beta);
    let s = span(alpha, beta);
    Ok(RatioPoint {
        alpha,
        beta,
        gamma_len: g,
        span: s,
        ratio: quotient(g, s),
    })
}

/// Ratio restricted to `β = 0`.
pub fn boundary_case(alpha: f64) -> f64 {
    quotient(gamma_len(alpha, 0.0), span(alpha, 0.0))
}

/// Ratio restricted to `β = α`.
pub fn diagonal_case(alpha: f64) -> f64 {
    quotient(gamma_len(alpha, alpha), span(alpha, alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximizer {
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    /// Best feasible grid value strictly off the diagonal and off both
    /// boundaries.
    pub interior_grid_max: f64,
    /// Best grid value ignoring the spacing constraint.
    pub unconstrained_grid_max: f64,
}

fn grid(step: f64) -> Vec<f64> {
    let hi = FRAC_PI_2 - CORNER_INSET;
    let n = (hi / step).floor() as usize;
    let mut v: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    if *v.last().unwrap() < hi {
        v.push(hi);
    }
    v
}

/// Grid search of the ratio over the feasible part of `[0, π/2 − ε]²`, then
/// golden-section refinement along the diagonal and along the boundary
/// `β = 0`.
pub fn maximize_ratio(grid_step: f64, refine_iters: usize) -> Maximizer {
    let axis = grid(grid_step);
    let trig: Vec<(f64, f64)> = axis.iter().map(|a| (a.sin(), a.cos())).collect();
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    let mut interior = f64::NEG_INFINITY;
    let mut unconstrained = f64::NEG_INFINITY;
    let mut diag_best = (f64::NEG_INFINITY, 0usize);
    let mut edge_best = (f64::NEG_INFINITY, 0usize);
    for (i, (&a, &(sa, ca))) in axis.iter().zip(&trig).enumerate() {
        for (j, (&b, &(sb, cb))) in axis.iter().zip(&trig).enumerate() {
            let v = quotient((sa + sb) + (PI - (a + b)), ca + cb);
            unconstrained = unconstrained.max(v);
            if ca + cb < MIN_SPAN {
                continue;
            }
            if v > best.0 {
                best = (v, i, j);
            }
            if i == j {
                if v > diag_best.0 {
                    diag_best = (v, i);
                }
            } else if i == 0 || j == 0 {
                if j == 0 && v > edge_best.0 {
                    edge_best = (v, i);
                }
            } else if v > interior {
                interior = v;
            }
        }
    }
    let lo_hi = |k: usize| {
        (
            axis[k.saturating_sub(1)],
            axis[(k + 1).min(axis.len() - 1)],
        )
    };
    // the diagonal leaves the feasible region at π/3
    let diag_end = (0.5 * MIN_SPAN).acos();
    let (dlo, dhi) = lo_hi(diag_best.1);
    let (da, dv) = golden_section_max(diagonal_case, dlo, dhi.min(diag_end), refine_iters);
    let (elo, ehi) = lo_hi(edge_best.1);
    let (ea, ev) = golden_section_max(boundary_case, elo, ehi, refine_iters);

    let mut out = Maximizer {
        alpha: axis[best.1],
        beta: axis[best.2],
        value: best.0,
        interior_grid_max: interior,
        unconstrained_grid_max: unconstrained,
    };
    if dv > out.value {
        out.alpha = da;
        out.beta = da;
        out.value = dv;
    }
    if ev > out.value {
        out.alpha = ea;
        out.beta = 0.0;
        out.value = ev;
    }
    out
}

/// Maximum of the per-disc length along the contour `cos α + cos β = s`,
/// scanning `α` at pitch `step`. Returns `(α, β, length)`.
pub fn contour_argmax(s: f64, step: f64) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for a in grid(step) {
        let c = s - a.cos();
        if !(0.0..=1.0).contains(&c) {
            continue;
        }
        let b = c.acos();
        let g = gamma_len(a, b);
        if best.is_none_or(|(_, _, bg)| g > bg) {
            best = Some((a, b, g));
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PieceBound {
    /// Length of the same construction on the circle with diameter `A_i B_i`.
    pub normalized_len: f64,
    pub piece_len: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Replaces the disc of `piece` by the circle on its chord as diameter and
/// checks `|γ_i| ≤ |γ'| ≤ (π/3 + √3)·span`.
pub fn normalized_gamma_piece_bound(piece: &GammaPiece, chord_a: f64, chord_b: f64, span: f64) -> PieceBound {
    let rho = 0.5 * (chord_b - chord_a);
    let mid = 0.5 * (chord_a + chord_b);
    let left = piece.c_point.x;
    let right = piece.d_point.x;
    let alpha = ((mid - left) / rho).clamp(-1.0, 1.0).acos();
    let beta = ((right - mid) / rho).clamp(-1.0, 1.0).acos();
    let normalized_len = rho * gamma_len(alpha, beta);
    let bound = theorem_constant() * span;
    let tol = 1e-9;
    PieceBound {
        normalized_len,
        piece_len: piece.length,
        bound,
        ok: piece.length <= normalized_len + tol && normalized_len <= bound + tol,
    }
}
