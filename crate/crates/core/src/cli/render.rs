//! SVG rendering of a covering with optional paths.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;

use crate::covering::Covering;
use crate::geom::{Piece, Point};

use super::doc::{from_xy, curve_from_doc, OracleDoc, PathDoc, PieceDoc};

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Sample pitch for shading the doubly covered region.
    pub pitch: f64,
    pub stroke: f64,
    pub disc_color: String,
    pub shade_color: String,
    pub gamma_color: String,
    pub piece_color: String,
    pub oracle_color: String,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            pitch: 0.1,
            stroke: 0.04,
            disc_color: "#888888".into(),
            shade_color: "#cfe3f7".into(),
            gamma_color: "#d62728".into(),
            piece_color: "#2ca02c".into(),
            oracle_color: "#9467bd".into(),
        }
    }
}

/// Fixed six-decimal formatting without a negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// World point to SVG user coordinates (y axis flipped).
fn xy(p: Point) -> String {
    format!("{} {}", num(p.x), num(-p.y))
}

/// SVG path data for a chain of pieces. Arcs are split into quarter turns so
/// the large-arc flag is never needed.
pub fn path_data(pieces: &[Piece]) -> String {
    let mut d = String::new();
    let Some(first) = pieces.first() else {
        return d;
    };
    write!(d, "M {}", xy(first.start())).unwrap();
    for p in pieces {
        match p {
            Piece::Segment { to, .. } => write!(d, " L {}", xy(*to)).unwrap(),
            Piece::Arc(a) => {
                let parts = (a.sweep() / FRAC_PI_2).ceil().max(1.0) as usize;
                // counter-clockwise in the plane is clockwise on screen
                let flag = u8::from(a.orientation == crate::geom::Orientation::Ccw);
                for k in 1..=parts {
                    let q = a.point_at(k as f64 / parts as f64);
                    let r = num(a.disc.radius);
                    write!(d, " A {r} {r} 0 0 {flag} {}", xy(q)).unwrap();
                }
            }
        }
    }
    d
}

fn doc_pieces(pieces: &[PieceDoc]) -> Vec<Piece> {
    curve_from_doc(pieces).pieces
}

pub fn render_svg(c: &Covering, paths: &[PathDoc], oracle: Option<&OracleDoc>, opt: &RenderOptions) -> String {
    let b = c.bbox();
    let sw = num(opt.stroke);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(b.xmin),
        num(-b.ymax),
        num(b.width()),
        num(b.height()),
        num(b.width() * 20.0),
        num(b.height() * 20.0),
    )
    .unwrap();

    writeln!(
        s,
        r#"<rect class="background" x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        num(b.xmin),
        num(-b.ymax),
        num(b.width()),
        num(b.height())
    )
    .unwrap();

    // doubly covered region, one rect per maximal run of samples in a row
    let h = opt.pitch;
    let nx = (b.width() / h).floor() as usize + 1;
    let ny = (b.height() / h).floor() as usize + 1;
    writeln!(s, r#"<g class="shade" fill="{}" stroke="none">"#, opt.shade_color).unwrap();
    for j in 0..ny {
        let y = b.ymin + j as f64 * h;
        let mut i = 0;
        while i < nx {
            let covered = |i: usize| c.coverage_count(Point::new(b.xmin + i as f64 * h, y), 1e-9) >= 2;
            if !covered(i) {
                i += 1;
                continue;
            }
            let start = i;
            while i < nx && covered(i) {
                i += 1;
            }
            let x0 = b.xmin + start as f64 * h - 0.5 * h;
            writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                num(x0),
                num(-(y + 0.5 * h)),
                num((i - start) as f64 * h),
                num(h)
            )
            .unwrap();
        }
    }
    writeln!(s, "</g>").unwrap();

    writeln!(s, r#"<g class="discs" fill="none" stroke="{}" stroke-width="{sw}">"#, opt.disc_color).unwrap();
    for d in c.discs() {
        writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            num(d.center.x),
            num(-d.center.y),
            num(d.radius)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();

    for p in paths {
        if let (Some(a), Some(bp)) = (p.a_prime, p.b_prime) {
            let (a, bp) = (from_xy(a), from_xy(bp));
            writeln!(
                s,
                r#"<line class="line" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{sw}"/>"#,
                num(a.x),
                num(-a.y),
                num(bp.x),
                num(-bp.y)
            )
            .unwrap();
        }
        for (k, m) in p.milestones.iter().enumerate() {
            let m = from_xy(*m);
            writeln!(
                s,
                r#"<text class="milestone" x="{}" y="{}" font-size="0.3">M{k}</text>"#,
                num(m.x),
                num(-m.y + 0.35)
            )
            .unwrap();
        }
        for gp in &p.gamma_pieces {
            writeln!(
                s,
                r#"<path class="gamma-piece" d="{}" fill="none" stroke="{}" stroke-width="{}" stroke-dasharray="0.1 0.08"/>"#,
                path_data(&doc_pieces(&gp.pieces)),
                opt.piece_color,
                num(opt.stroke * 0.75)
            )
            .unwrap();
        }
        for con in &p.connectors {
            if con.length > 0.0 {
                writeln!(
                    s,
                    r#"<path class="connector" d="{}" fill="none" stroke="{}" stroke-width="{sw}"/>"#,
                    path_data(&doc_pieces(&con.pieces)),
                    opt.gamma_color
                )
                .unwrap();
            }
        }
        writeln!(
            s,
            r#"<path class="gamma" d="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            path_data(&doc_pieces(&p.pieces)),
            opt.gamma_color,
            num(opt.stroke * 1.5)
        )
        .unwrap();
    }

    if let Some(o) = oracle {
        let pts: Vec<String> = o
            .polyline
            .iter()
            .map(|&q| {
                let q = from_xy(q);
                format!("{},{}", num(q.x), num(-q.y))
            })
            .collect();
        writeln!(
            s,
            r#"<polyline class="oracle" points="{}" fill="none" stroke="{}" stroke-width="{sw}"/>"#,
            pts.join(" "),
            opt.oracle_color
        )
        .unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}
