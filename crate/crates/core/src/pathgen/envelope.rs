use crate::geom::{circle_circle_intersections, ArcPiece, Disc, Point};
use crate::subcover::SubcoverChain;

use super::{cap_height, cap_orientation, Run};

/// Mirrors a disc so that its cap lies above the line.
fn mirrored(d: &Disc, line_y: f64, sign: f64) -> Disc {
    Disc {
        center: Point::new(d.center.x, sign * (d.center.y - line_y)),
        radius: d.radius,
    }
}

/// Breakpoints between consecutive run discs: the upper crossing of their
/// mirrored boundaries, returned in the original orientation.
fn breakpoints(chain: &SubcoverChain, run: &Run) -> Vec<Point> {
    let s = run.side.sign();
    let y0 = chain.line_y;
    (run.start..run.start + run.k - 1)
        .map(|j| {
            let p = mirrored(&chain.discs[j], y0, s);
            let q = mirrored(&chain.discs[j + 1], y0, s);
            let lo = chain.chords[j + 1].a;
            let hi = chain.chords[j].b;
            let x = match circle_circle_intersections(&p, &q) {
                Ok(pts) if !pts.is_empty() => pts[pts.len() - 1].x.clamp(lo, hi),
                _ => 0.5 * (lo + hi),
            };
            Point::new(x, y0 + cap_height(&chain.discs[j], y0, run.side, x))
        })
        .collect()
}

/// Outer envelope of the caps of a run over `[x_from, x_to]`, as arcs
/// ordered left to right.
pub fn envelope(chain: &SubcoverChain, run: &Run, x_from: f64, x_to: f64) -> Vec<ArcPiece> {
    let y0 = chain.line_y;
    let bps = breakpoints(chain, run);
    let orientation = cap_orientation(run.side);
    let mut arcs = Vec::new();
    for (off, j) in (run.start..run.start + run.k).enumerate() {
        let d = chain.discs[j];
        let lo = if off == 0 {
            chain.milestones[run.start]
        } else {
            bps[off - 1].x
        };
        let hi = if off + 1 == run.k {
            chain.milestones[run.start + run.k]
        } else {
            bps[off].x
        };
        let x0 = lo.max(x_from);
        let x1 = hi.min(x_to);
        if !(x1 - x0 > 1e-12) {
            continue;
        }
        let at = |x: f64, exact: Option<Point>| match exact {
            Some(p) if p.x == x => p,
            _ => Point::new(x, y0 + cap_height(&d, y0, run.side, x)),
        };
        let p0 = at(x0, (off > 0).then(|| bps[off - 1]));
        let p1 = at(x1, (off + 1 < run.k).then(|| bps[off]));
        if let Some(arc) = ArcPiece::between(d, p0, p1, orientation) {
            arcs.push(arc);
        }
    }
    arcs
}

/// Signed envelope height at `x`: the outermost cap among run discs whose
/// chord spans `x`.
pub fn envelope_height(chain: &SubcoverChain, run: &Run, x: f64) -> Option<f64> {
    let s = run.side.sign();
    (run.start..run.start + run.k)
        .filter(|&j| chain.chords[j].a <= x && x <= chain.chords[j].b)
        .map(|j| s * cap_height(&chain.discs[j], chain.line_y, run.side, x))
        .max_by(f64::total_cmp)
        .map(|h| s * h)
}
