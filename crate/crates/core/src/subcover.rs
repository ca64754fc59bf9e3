//! Chords cut by the discs on a horizontal line, a minimum-cardinality cover
//! of a segment by those chords, and the milestones between consecutive
//! chords.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::Covering;
use crate::geom::{circle_horizontal_line_intersections, Disc, DEFAULT_TOL};

/// Centres within this distance of the line count as lying on it.
pub const ON_LINE_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubcoverError {
    #[error("segment is empty (xA = {0}, xB = {1})")]
    EmptySegment(f64, f64),
    #[error("segment is not covered past x = {0}")]
    UncoveredGap(f64),
}

/// Chord `[a, b]` cut by disc `disc_index` on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordInterval {
    pub disc_index: usize,
    pub a: f64,
    pub b: f64,
}

/// Side of the line holding the part of a disc that misses its centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

impl Side {
    /// +1 above the line, -1 below.
    pub fn sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }

    /// Side of the minor cap of a disc centred at height `cy` over `y0`.
    pub fn of_minor_cap(cy: f64, y0: f64) -> Side {
        if (cy - y0).abs() <= ON_LINE_EPS || cy < y0 {
            Side::Above
        } else {
            Side::Below
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcoverChain {
    pub line_y: f64,
    pub x_a: f64,
    pub x_b: f64,
    pub chords: Vec<ChordInterval>,
    /// Disc of each chord, in chain order.
    pub discs: Vec<Disc>,
    /// Abscissae `M_0 … M_n`.
    pub milestones: Vec<f64>,
    pub sides: Vec<Side>,
}

impl SubcoverChain {
    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    /// Checks ordering, overlap, minimality and milestone placement.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.len();
        if n == 0 {
            return Err("empty chain".into());
        }
        if self.milestones.len() != n + 1 || self.sides.len() != n || self.discs.len() != n {
            return Err("length mismatch".into());
        }
        for (i, c) in self.chords.iter().enumerate() {
            if !(c.a < c.b) {
                return Err(format!("chord {i} is empty"));
            }
        }
        for i in 0..n.saturating_sub(1) {
            let (p, q) = (&self.discs[i], &self.discs[i + 1]);
            let ordered = p.center.x < q.center.x
                || (p.center.x == q.center.x && self.chords[i].disc_index < self.chords[i + 1].disc_index);
            if !ordered {
                return Err(format!("centres {i} and {} out of order", i + 1));
            }
            if self.chords[i + 1].a > self.chords[i].b + DEFAULT_TOL {
                return Err(format!("gap between chords {i} and {}", i + 1));
            }
        }
        for i in 0..n.saturating_sub(2) {
            if !(self.chords[i + 2].a > self.chords[i].b) {
                return Err(format!("chords {i} and {} overlap", i + 2));
            }
        }
        if self.milestones[0] != self.x_a || self.milestones[n] != self.x_b {
            return Err("end milestones differ from segment ends".into());
        }
        for i in 1..n {
            let m = 0.5 * (self.chords[i].a + self.chords[i - 1].b);
            if self.milestones[i] != m {
                return Err(format!("milestone {i} misplaced"));
            }
        }
        for w in self.milestones.windows(2) {
            if !(w[0] < w[1]) {
                return Err("milestones not strictly increasing".into());
            }
        }
        Ok(())
    }

    /// `M_i - M_{i-1} ≥ |A_i B_i| / 2` for every chord.
    pub fn half_chord_spacing_holds(&self, tol: f64) -> bool {
        self.chords.iter().enumerate().all(|(k, c)| {
            self.milestones[k + 1] - self.milestones[k] >= 0.5 * (c.b - c.a) - tol
        })
    }

    /// Chords where the spacing falls short of the full chord length.
    pub fn full_chord_spacing_violations(&self) -> Vec<usize> {
        self.chords
            .iter()
            .enumerate()
            .filter(|(k, c)| self.milestones[k + 1] - self.milestones[*k] < c.b - c.a)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Chords of every disc whose open chord on `y = y0` meets `[x_a, x_b]`.
/// Tangent discs are skipped.
pub fn chords_on_segment(c: &Covering, y0: f64, x_a: f64, x_b: f64) -> Vec<ChordInterval> {
    c.discs()
        .iter()
        .enumerate()
        .filter_map(|(k, d)| {
            let pts = circle_horizontal_line_intersections(d, y0);
            if pts.len() != 2 {
                return None;
            }
            let (a, b) = (pts[0].x, pts[1].x);
            (a < x_b && b > x_a).then_some(ChordInterval { disc_index: k, a, b })
        })
        .collect()
}

/// Furthest-reach greedy cover of `[x_a, x_b]`.
pub fn greedy_minimal_subcover(
    intervals: &[ChordInterval],
    x_a: f64,
    x_b: f64,
) -> Result<Vec<ChordInterval>, SubcoverError> {
    if !(x_a < x_b) {
        return Err(SubcoverError::EmptySegment(x_a, x_b));
    }
    let tol = DEFAULT_TOL;
    let mut out: Vec<ChordInterval> = Vec::new();
    let mut x = x_a;
    loop {
        let best = intervals
            .iter()
            .filter(|iv| iv.a <= x + tol && iv.b > x)
            .min_by(|p, q| q.b.total_cmp(&p.b).then(p.disc_index.cmp(&q.disc_index)));
        match best {
            Some(iv) if out.is_empty() || iv.b > x + tol => {
                out.push(*iv);
                x = iv.b;
            }
            _ => return Err(SubcoverError::UncoveredGap(x)),
        }
        if x >= x_b - tol {
            return Ok(out);
        }
    }
}

/// Builds the ordered chain with milestones and cap sides.
pub fn build_chain(c: &Covering, y0: f64, x_a: f64, x_b: f64) -> Result<SubcoverChain, SubcoverError> {
    let pool = chords_on_segment(c, y0, x_a, x_b);
    let chords = greedy_minimal_subcover(&pool, x_a, x_b)?;
    let discs: Vec<Disc> = chords.iter().map(|ch| c.discs()[ch.disc_index]).collect();
    Ok(chain_from_chords(y0, x_a, x_b, chords, discs))
}

/// Milestones and sides for an already chosen cover.
pub fn chain_from_chords(
    y0: f64,
    x_a: f64,
    x_b: f64,
    chords: Vec<ChordInterval>,
    discs: Vec<Disc>,
) -> SubcoverChain {
    let n = chords.len();
    let mut milestones = Vec::with_capacity(n + 1);
    milestones.push(x_a);
    for i in 1..n {
        milestones.push(0.5 * (chords[i].a + chords[i - 1].b));
    }
    milestones.push(x_b);
    let sides = discs.iter().map(|d| Side::of_minor_cap(d.center.y, y0)).collect();
    SubcoverChain {
        line_y: y0,
        x_a,
        x_b,
        chords,
        discs,
        milestones,
        sides,
    }
}
