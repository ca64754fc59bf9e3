//! Command line front end. Every command returns an [`Outcome`] holding the
//! text for stdout and stderr plus the process exit code, so the binary is a
//! thin wrapper and the commands can be driven in-process from tests.

pub mod doc;
pub mod render;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{
    maximize_ratio, normalized_gamma_piece_bound, theorem_constant, two_circle_shortest, two_circle_worst_ratio,
    MIN_SPAN,
};
use crate::covering::{
    gen_perturbed_lattice, gen_random, gen_square_lattice, BBox, CoverageReport, Covering, CoveringError,
};
use crate::geom::Point;
use crate::oracle::{GridGraph, OracleError};
use crate::pathgen::{construct, ConnectorConfig, PathError};
use crate::subcover::SubcoverError;

use doc::{to_xy, ChainLinkDoc, BoundCheck, ChecksDoc, CurveDoc, GammaPieceDoc, OracleDoc, PathDoc};
use render::{render_svg, RenderOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COVERING: i32 = 2;
pub const EXIT_NOT_DOUBLY_COVERED: i32 = 3;
pub const EXIT_UNCOVERED_SEGMENT: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

/// Slack on the per-piece and global length bounds.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "doublecover", version, about = "Short paths through the doubly covered region of a unit-disc covering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a covering and check that it covers its box.
    Gen(GenArgs),
    /// Build the doubly covered path between two points.
    Path(PathArgs),
    /// Per-disc length bound and its maximizer.
    Bounds(BoundsArgs),
    /// Worst ratio in the two-circle problem.
    Worstpair(WorstpairArgs),
    /// Grid shortest path through the doubly covered region.
    Oracle(OracleArgs),
    /// Check a covering and optionally a path file against it.
    Verify(VerifyArgs),
    /// Draw a covering and paths as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
    /// Covering JSON output; printed to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Sample pitch of the covering check.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub step: f64,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Square lattice anchored at the origin.
    Lattice {
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        spacing: f64,
        #[arg(long, num_args = 4, value_names = ["XMIN", "YMIN", "XMAX", "YMAX"], allow_negative_numbers = true, default_values_t = [0.0, 0.0, 40.0, 40.0])]
        bbox: Vec<f64>,
    },
    /// Square lattice with every centre moved by a seeded random offset.
    Perturbed {
        #[arg(long, default_value_t = 1.2)]
        spacing: f64,
        #[arg(long, default_value_t = 0.1)]
        jitter: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, num_args = 4, value_names = ["XMIN", "YMIN", "XMAX", "YMAX"], allow_negative_numbers = true, default_values_t = [0.0, 0.0, 30.0, 30.0])]
        bbox: Vec<f64>,
    },
    /// Uniform random centres, completed until the box is covered.
    Random {
        #[arg(long, default_value_t = 400)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, num_args = 4, value_names = ["XMIN", "YMIN", "XMAX", "YMAX"], allow_negative_numbers = true, default_values_t = [0.0, 0.0, 20.0, 20.0])]
        bbox: Vec<f64>,
    },
}

#[derive(Debug, Args, Clone)]
pub struct PathArgs {
    #[arg(long)]
    pub covering: PathBuf,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, required = true)]
    pub from: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, required = true)]
    pub to: Vec<f64>,
    /// Path JSON output; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sample pitch of the double coverage check.
    #[arg(long, default_value_t = 0.01)]
    pub pitch: f64,
    /// Containment tolerance of the double coverage check.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Grid pitch used to route the endpoint connectors.
    #[arg(long, default_value_t = 0.02)]
    pub connector_pitch: f64,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
    #[arg(long, default_value_t = crate::bounds::DEFAULT_REFINE_ITERS)]
    pub refine_iters: usize,
}

#[derive(Debug, Args)]
pub struct WorstpairArgs {
    #[arg(long, default_value_t = 0.02)]
    pub coarse_step: f64,
    #[arg(long, default_value_t = crate::bounds::DEFAULT_REFINE_ITERS)]
    pub refine_iters: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub covering: PathBuf,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, required = true)]
    pub from: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, required = true)]
    pub to: Vec<f64>,
    #[arg(long, default_value_t = 0.02)]
    pub h: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Grid box; defaults to the endpoints' box padded by `--pad`.
    #[arg(long, num_args = 4, value_names = ["XMIN", "YMIN", "XMAX", "YMAX"], allow_negative_numbers = true)]
    pub bbox: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2.0)]
    pub pad: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub covering: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Path JSON to check for double coverage and recorded length.
    #[arg(long)]
    pub path: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub pitch: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub covering: PathBuf,
    /// Path JSON files to draw; repeatable.
    #[arg(long)]
    pub path: Vec<PathBuf>,
    /// Oracle JSON whose polyline is drawn.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    /// SVG output; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sample pitch for shading the doubly covered region.
    #[arg(long, default_value_t = 0.1)]
    pub pitch: f64,
    #[arg(long, default_value_t = 0.04)]
    pub stroke: f64,
    #[arg(long, default_value = "#888888")]
    pub disc_color: String,
    #[arg(long, default_value = "#cfe3f7")]
    pub shade_color: String,
    #[arg(long, default_value = "#d62728")]
    pub gamma_color: String,
    #[arg(long, default_value = "#2ca02c")]
    pub piece_color: String,
    #[arg(long, default_value = "#9467bd")]
    pub oracle_color: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn positive(name: &str, v: f64) -> Result<(), Outcome> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Outcome::fail(EXIT_USAGE, format!("--{name} must be positive, got {v}")))
    }
}

fn bbox_arg(v: &[f64]) -> Result<BBox, Outcome> {
    let b = BBox::new(v[0], v[1], v[2], v[3]);
    if b.is_valid() {
        Ok(b)
    } else {
        Err(Outcome::fail(EXIT_USAGE, "--bbox needs finite XMIN < XMAX and YMIN < YMAX"))
    }
}

fn point_arg(v: &[f64]) -> Point {
    Point::new(v[0], v[1])
}

fn load_covering(p: &Path) -> Result<Covering, Outcome> {
    Covering::load(p).map_err(|e| Outcome::fail(EXIT_COVERING, format!("{}: {e}", p.display())))
}

fn write_or_print(out: &Option<PathBuf>, text: String) -> Result<Option<String>, Outcome> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map(|_| None)
            .map_err(|e| Outcome::fail(EXIT_USAGE, format!("{}: {e}", p.display()))),
        None => Ok(Some(text)),
    }
}

fn collapse(r: Result<Outcome, Outcome>) -> Outcome {
    r.unwrap_or_else(|e| e)
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen(a) => collapse(cmd_gen(&a)),
        Command::Path(a) => collapse(cmd_path(&a)),
        Command::Bounds(a) => collapse(cmd_bounds(&a)),
        Command::Worstpair(a) => collapse(cmd_worstpair(&a)),
        Command::Oracle(a) => collapse(cmd_oracle(&a)),
        Command::Verify(a) => collapse(cmd_verify(&a)),
        Command::Render(a) => collapse(cmd_render(&a)),
    }
}

#[derive(Serialize)]
struct GenReport {
    kind: &'static str,
    discs: usize,
    report: CoverageReport,
}

fn cmd_gen(a: &GenArgs) -> Result<Outcome, Outcome> {
    positive("step", a.step)?;
    let (kind, made) = match &a.kind {
        GenKind::Lattice { spacing, bbox } => {
            positive("spacing", *spacing)?;
            ("lattice", gen_square_lattice(*spacing, bbox_arg(bbox)?))
        }
        GenKind::Perturbed {
            spacing,
            jitter,
            seed,
            bbox,
        } => {
            positive("spacing", *spacing)?;
            if !(*jitter >= 0.0 && jitter.is_finite()) {
                return Err(Outcome::fail(EXIT_USAGE, "--jitter must be non-negative"));
            }
            ("perturbed", gen_perturbed_lattice(*spacing, *jitter, *seed, bbox_arg(bbox)?))
        }
        GenKind::Random { count, seed, bbox } => ("random", gen_random(*count, *seed, bbox_arg(bbox)?)),
    };
    let c = made.map_err(|e: CoveringError| Outcome::fail(EXIT_COVERING, e))?;
    let report = c.verify_covering(a.step);
    let summary = json(&GenReport {
        kind,
        discs: c.discs().len(),
        report,
    });
    let mut out = Outcome::default();
    match write_or_print(&a.out, c.to_json() + "\n")? {
        Some(covering) => {
            out.stdout = covering;
            out.stderr = summary;
        }
        None => out.stdout = summary,
    }
    if !report.pass {
        out.code = EXIT_COVERING;
        let w = report.worst_point;
        out.stderr
            .push_str(&format!("error: not a covering; ({}, {}) is covered {} times\n", w.x, w.y, report.min_count));
    }
    Ok(out)
}

fn path_error_code(e: &PathError) -> i32 {
    match e {
        PathError::NotDoublyCovered { .. } | PathError::NoChord(_) => EXIT_NOT_DOUBLY_COVERED,
        PathError::Subcover(SubcoverError::UncoveredGap(_)) | PathError::Subcover(SubcoverError::EmptySegment(..)) => {
            EXIT_UNCOVERED_SEGMENT
        }
        PathError::ConnectorNotFound { .. } => EXIT_VERIFY,
        PathError::Covering(_) => EXIT_COVERING,
        PathError::Degenerate => EXIT_USAGE,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PathOptions {
    pub pitch: f64,
    pub tol: f64,
    pub connector: ConnectorConfig,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            pitch: 0.01,
            tol: 1e-6,
            connector: ConnectorConfig::default(),
        }
    }
}

/// Runs the whole construction and all of its checks. Returns the document
/// and the exit code the `path` command would report, or the exit code and
/// message of a failed construction.
pub fn build_path_doc(c: &Covering, a: Point, b: Point, opt: &PathOptions) -> Result<(PathDoc, i32), (i32, String)> {
    let con = construct(c, a, b, &opt.connector).map_err(|e| (path_error_code(&e), e.to_string()))?;
    let frame = *con.frame();
    let world = |x: f64| frame.to_world(Point::new(x, 0.0));
    let k = theorem_constant();

    let gamma_len: f64 = con.gamma.pieces.iter().map(|p| p.length()).sum();
    let chained = con.gamma_world.check_chained(1e-9).is_ok()
        && con.normalized.connector_a.check_chained(1e-9).is_ok()
        && con.normalized.connector_b.check_chained(1e-9).is_ok();
    let doubly_covered = c.verify_doubly_covered_path(&con.gamma_world, opt.pitch, opt.tol);
    let connector_a = c.verify_doubly_covered_path(&con.normalized.connector_a, opt.pitch, opt.tol);
    let connector_b = c.verify_doubly_covered_path(&con.normalized.connector_b, opt.pitch, opt.tol);

    let mut pieces_ok = true;
    let mut piece_sum = 0.0;
    let gamma_pieces: Vec<GammaPieceDoc> = con
        .pieces
        .iter()
        .map(|p| {
            let ch = con.chain.chords[p.index];
            let nb = normalized_gamma_piece_bound(p, ch.a, ch.b, p.span);
            let ok = nb.ok && p.length <= k * p.span + BOUND_SLACK;
            pieces_ok &= ok;
            piece_sum += p.length;
            GammaPieceDoc {
                index: p.index,
                length: p.length,
                alpha: p.alpha,
                beta: p.beta,
                span: p.span,
                normalized_length: nb.normalized_len,
                bound: nb.bound,
                ok,
                pieces: doc::pieces_doc(&p.curve.transformed(frame.world_motion())),
            }
        })
        .collect();

    let span = con.chain.x_b - con.chain.x_a;
    let sum_bound = BoundCheck {
        value: gamma_len,
        limit: piece_sum,
        ok: gamma_len <= piece_sum + BOUND_SLACK,
    };
    let global_bound = BoundCheck {
        value: gamma_len,
        limit: k * span,
        ok: gamma_len <= k * span + BOUND_SLACK,
    };
    let pass = chained
        && doubly_covered.pass
        && connector_a.pass
        && connector_b.pass
        && pieces_ok
        && sum_bound.ok
        && global_bound.ok;

    let conn_a = CurveDoc::new(&con.normalized.connector_a);
    let conn_b = CurveDoc::new(&con.normalized.connector_b);
    let chain = con
        .chain
        .chords
        .iter()
        .zip(&con.chain.discs)
        .zip(&con.chain.sides)
        .map(|((ch, d), side)| ChainLinkDoc {
            disc_index: ch.disc_index,
            center: to_xy(frame.to_world(d.center)),
            a: ch.a,
            b: ch.b,
            side: *side,
        })
        .collect();
    let doc = PathDoc {
        length: gamma_len,
        pieces: doc::pieces_doc(&con.gamma_world),
        from: Some(to_xy(a)),
        to: Some(to_xy(b)),
        a_prime: Some(to_xy(con.normalized.a_prime)),
        b_prime: Some(to_xy(con.normalized.b_prime)),
        ratio: Some(gamma_len / span),
        total_length: Some(conn_a.length + gamma_len + conn_b.length),
        connectors: vec![conn_a, conn_b],
        milestones: con.chain.milestones.iter().map(|&m| to_xy(world(m))).collect(),
        chain,
        gamma_pieces,
        checks: Some(ChecksDoc {
            chained,
            doubly_covered,
            connector_a,
            connector_b,
            pieces_ok,
            sum_bound,
            global_bound,
            pass,
        }),
    };
    Ok((doc, if pass { EXIT_OK } else { EXIT_VERIFY }))
}

fn cmd_path(a: &PathArgs) -> Result<Outcome, Outcome> {
    positive("pitch", a.pitch)?;
    positive("tol", a.tol)?;
    positive("connector-pitch", a.connector_pitch)?;
    let c = load_covering(&a.covering)?;
    let opt = PathOptions {
        pitch: a.pitch,
        tol: a.tol,
        connector: ConnectorConfig {
            pitch: a.connector_pitch,
            ..ConnectorConfig::default()
        },
    };
    let (doc, code) =
        build_path_doc(&c, point_arg(&a.from), point_arg(&a.to), &opt).map_err(|(code, msg)| Outcome::fail(code, msg))?;
    let mut out = Outcome {
        code,
        ..Outcome::default()
    };
    if let Some(text) = write_or_print(&a.out, json(&doc))? {
        out.stdout = text;
    }
    if code != EXIT_OK {
        out.stderr = "error: path verification failed; see \"checks\"\n".into();
    }
    Ok(out)
}

#[derive(Serialize)]
struct BoundsReport {
    constant: f64,
    argmax: [f64; 2],
    value: f64,
    interior_grid_max: f64,
    unconstrained_grid_max: f64,
    min_span: f64,
    grid_step: f64,
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome, Outcome> {
    positive("grid-step", a.grid_step)?;
    let m = maximize_ratio(a.grid_step, a.refine_iters);
    Ok(Outcome::ok(json(&BoundsReport {
        constant: theorem_constant(),
        argmax: [m.alpha, m.beta],
        value: m.value,
        interior_grid_max: m.interior_grid_max,
        unconstrained_grid_max: m.unconstrained_grid_max,
        min_span: MIN_SPAN,
        grid_step: a.grid_step,
    })))
}

#[derive(Serialize)]
struct WorstpairReport {
    ratio: f64,
    t: f64,
    theta_a: f64,
    theta_b: f64,
    a: [f64; 2],
    b: [f64; 2],
    length: f64,
    distance: f64,
    choice: usize,
    candidates: [f64; 4],
}

fn cmd_worstpair(a: &WorstpairArgs) -> Result<Outcome, Outcome> {
    positive("coarse-step", a.coarse_step)?;
    let w = two_circle_worst_ratio(a.coarse_step, a.refine_iters);
    let s = two_circle_shortest(&w.config).map_err(|e| Outcome::fail(EXIT_VERIFY, e))?;
    Ok(Outcome::ok(json(&WorstpairReport {
        ratio: w.ratio,
        t: w.config.t,
        theta_a: w.config.theta_a,
        theta_b: w.config.theta_b,
        a: to_xy(w.config.a()),
        b: to_xy(w.config.b()),
        length: w.length,
        distance: w.distance,
        choice: s.choice,
        candidates: s.candidates,
    })))
}

fn cmd_oracle(a: &OracleArgs) -> Result<Outcome, Outcome> {
    positive("h", a.h)?;
    positive("tol", a.tol)?;
    let c = load_covering(&a.covering)?;
    let (from, to) = (point_arg(&a.from), point_arg(&a.to));
    let bbox = match &a.bbox {
        Some(v) => bbox_arg(v)?,
        None => {
            positive("pad", a.pad)?;
            BBox::around(&[from, to], a.pad)
        }
    };
    let route = GridGraph::build(&c, bbox, a.h, a.tol)
        .and_then(|g| g.shortest_path(from, to))
        .map_err(|e| {
            let code = match e {
                OracleError::BadPitch => EXIT_USAGE,
                OracleError::SnapFailed(..) => EXIT_NOT_DOUBLY_COVERED,
                OracleError::EmptyGraph | OracleError::Unreachable => EXIT_VERIFY,
            };
            Outcome::fail(code, e)
        })?;
    let doc = OracleDoc {
        length: route.length,
        h: a.h,
        polyline: route.polyline.iter().map(|&p| to_xy(p)).collect(),
    };
    Ok(Outcome::ok(write_or_print(&a.out, json(&doc))?.unwrap_or_default()))
}

#[derive(Serialize)]
struct PathCheck {
    report: CoverageReport,
    recorded_length: f64,
    measured_length: Option<f64>,
    length_ok: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    covering: CoverageReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<PathCheck>,
}

pub fn load_path_doc(p: &Path) -> Result<PathDoc, String> {
    let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, Outcome> {
    positive("step", a.step)?;
    positive("pitch", a.pitch)?;
    positive("tol", a.tol)?;
    let c = load_covering(&a.covering)?;
    let covering = c.verify_covering(a.step);
    let path = match &a.path {
        None => None,
        Some(p) => {
            let doc = load_path_doc(p).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
            let curve = doc.curve();
            let measured = curve.length().ok();
            Some(PathCheck {
                report: c.verify_doubly_covered_path(&curve, a.pitch, a.tol),
                recorded_length: doc.length,
                measured_length: measured,
                length_ok: measured.is_some_and(|m| (m - doc.length).abs() <= 1e-9),
            })
        }
    };
    let code = if !covering.pass {
        EXIT_COVERING
    } else if path.as_ref().is_some_and(|p| !p.report.pass || !p.length_ok) {
        EXIT_VERIFY
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        code,
        stdout: json(&VerifyReport { covering, path }),
        stderr: String::new(),
    })
}

fn cmd_render(a: &RenderArgs) -> Result<Outcome, Outcome> {
    positive("pitch", a.pitch)?;
    positive("stroke", a.stroke)?;
    let c = load_covering(&a.covering)?;
    let paths = a
        .path
        .iter()
        .map(|p| load_path_doc(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    let oracle = match &a.oracle {
        None => None,
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Outcome::fail(EXIT_USAGE, format!("{}: {e}", p.display())))?;
            Some(
                serde_json::from_str::<OracleDoc>(&text)
                    .map_err(|e| Outcome::fail(EXIT_USAGE, format!("{}: {e}", p.display())))?,
            )
        }
    };
    let opt = RenderOptions {
        pitch: a.pitch,
        stroke: a.stroke,
        disc_color: a.disc_color.clone(),
        shade_color: a.shade_color.clone(),
        gamma_color: a.gamma_color.clone(),
        piece_color: a.piece_color.clone(),
        oracle_color: a.oracle_color.clone(),
    };
    let svg = render_svg(&c, &paths, oracle.as_ref(), &opt);
    Ok(Outcome::ok(write_or_print(&a.out, svg)?.unwrap_or_default()))
}
