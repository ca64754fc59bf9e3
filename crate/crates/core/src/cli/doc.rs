//! JSON documents written by the command line tool.

use serde::{Deserialize, Serialize};

use crate::covering::CoverageReport;
use crate::geom::{ArcPiece, Disc, Orientation, PathCurve, Piece, Point};
use crate::subcover::Side;

pub(crate) fn to_xy(p: Point) -> [f64; 2] {
    [p.x, p.y]
}

pub(crate) fn from_xy(a: [f64; 2]) -> Point {
    Point::new(a[0], a[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PieceDoc {
    Seg {
        from: [f64; 2],
        to: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        from_angle: f64,
        to_angle: f64,
        ccw: bool,
    },
}

impl PieceDoc {
    pub fn from_piece(p: &Piece) -> Self {
        match p {
            Piece::Segment { from, to } => PieceDoc::Seg {
                from: to_xy(*from),
                to: to_xy(*to),
            },
            Piece::Arc(a) => PieceDoc::Arc {
                center: to_xy(a.disc.center),
                radius: a.disc.radius,
                from_angle: a.start_angle,
                to_angle: a.end_angle,
                ccw: a.orientation == Orientation::Ccw,
            },
        }
    }

    pub fn to_piece(&self) -> Piece {
        match *self {
            PieceDoc::Seg { from, to } => Piece::Segment {
                from: from_xy(from),
                to: from_xy(to),
            },
            PieceDoc::Arc {
                center,
                radius,
                from_angle,
                to_angle,
                ccw,
            } => Piece::Arc(ArcPiece {
                disc: Disc {
                    center: from_xy(center),
                    radius,
                },
                start_angle: from_angle,
                end_angle: to_angle,
                orientation: if ccw { Orientation::Ccw } else { Orientation::Cw },
            }),
        }
    }
}

pub fn pieces_doc(c: &PathCurve) -> Vec<PieceDoc> {
    c.pieces.iter().map(PieceDoc::from_piece).collect()
}

pub fn curve_from_doc(pieces: &[PieceDoc]) -> PathCurve {
    PathCurve::from_pieces(pieces.iter().map(PieceDoc::to_piece).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub length: f64,
    pub pieces: Vec<PieceDoc>,
}

impl CurveDoc {
    pub fn new(c: &PathCurve) -> Self {
        CurveDoc {
            length: c.pieces.iter().map(|p| p.length()).sum(),
            pieces: pieces_doc(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLinkDoc {
    pub disc_index: usize,
    pub center: [f64; 2],
    /// Chord ends on the line, as distances from `A'` along `A'B'`.
    pub a: f64,
    pub b: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaPieceDoc {
    pub index: usize,
    pub length: f64,
    pub alpha: f64,
    pub beta: f64,
    pub span: f64,
    pub normalized_length: f64,
    pub bound: f64,
    pub ok: bool,
    pub pieces: Vec<PieceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub value: f64,
    pub limit: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecksDoc {
    pub chained: bool,
    pub doubly_covered: CoverageReport,
    pub connector_a: CoverageReport,
    pub connector_b: CoverageReport,
    pub pieces_ok: bool,
    /// `|γ|` against the sum of the per-disc pieces.
    pub sum_bound: BoundCheck,
    /// `|γ|` against `(π/3 + √3)·|A'B'|`.
    pub global_bound: BoundCheck,
    pub pass: bool,
}

/// Output of the `path` command. Only `length` and `pieces` are required
/// when loading, so hand-written paths can be rendered and verified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDoc {
    pub length: f64,
    pub pieces: Vec<PieceDoc>,
    #[serde(default)]
    pub from: Option<[f64; 2]>,
    #[serde(default)]
    pub to: Option<[f64; 2]>,
    #[serde(default)]
    pub a_prime: Option<[f64; 2]>,
    #[serde(default)]
    pub b_prime: Option<[f64; 2]>,
    #[serde(default)]
    pub ratio: Option<f64>,
    #[serde(default)]
    pub total_length: Option<f64>,
    #[serde(default)]
    pub connectors: Vec<CurveDoc>,
    #[serde(default)]
    pub milestones: Vec<[f64; 2]>,
    #[serde(default)]
    pub chain: Vec<ChainLinkDoc>,
    #[serde(default)]
    pub gamma_pieces: Vec<GammaPieceDoc>,
    #[serde(default)]
    pub checks: Option<ChecksDoc>,
}

impl PathDoc {
    pub fn curve(&self) -> PathCurve {
        curve_from_doc(&self.pieces)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDoc {
    pub length: f64,
    pub h: f64,
    pub polyline: Vec<[f64; 2]>,
}
