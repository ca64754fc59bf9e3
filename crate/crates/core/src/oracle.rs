//! Brute-force shortest paths on a grid discretization of the doubly covered
//! region.
//!
//! Nodes sit on an axis-aligned grid of pitch `h` with 8-neighbour moves. A
//! node is usable when it is covered at least twice; an edge is usable when
//! both of its endpoints and its midpoint are. Classification runs once on a
//! half-pitch raster so that queries never touch the geometry again.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::covering::{BBox, Covering};
use crate::geom::Point;

pub const DEFAULT_PITCH: f64 = 0.02;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid pitch must be positive")]
    BadPitch,
    #[error("no grid node is doubly covered")]
    EmptyGraph,
    #[error("no doubly covered node within snap radius of ({0}, {1})")]
    SnapFailed(f64, f64),
    #[error("endpoints are not connected in the doubly covered grid")]
    Unreachable,
}

#[derive(Debug, Clone)]
pub struct GridGraph {
    origin: Point,
    h: f64,
    nx: usize,
    ny: usize,
    // (2nx-1) x (2ny-1) raster at pitch h/2; even coordinates are nodes
    fine: Vec<bool>,
}

const MOVES: [(i64, i64); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

impl GridGraph {
    /// Classifies every node and edge midpoint of the grid over `bbox`.
    pub fn build(c: &Covering, bbox: BBox, h: f64, tol: f64) -> Result<Self, OracleError> {
        if !(h > 0.0) || !h.is_finite() || !bbox.is_valid() {
            return Err(OracleError::BadPitch);
        }
        let nx = (bbox.width() / h + 1e-9).floor() as usize + 1;
        let ny = (bbox.height() / h + 1e-9).floor() as usize + 1;
        let fw = 2 * nx - 1;
        let fh = 2 * ny - 1;
        let half = 0.5 * h;
        let origin = Point::new(bbox.xmin, bbox.ymin);
        let mut fine = vec![false; fw * fh];
        for fj in 0..fh {
            let y = origin.y + fj as f64 * half;
            for fi in 0..fw {
                let x = origin.x + fi as f64 * half;
                fine[fj * fw + fi] = c.coverage_count(Point::new(x, y), tol) >= 2;
            }
        }
        let g = GridGraph {
            origin,
            h,
            nx,
            ny,
            fine,
        };
        if g.node_count() == 0 {
            return Err(OracleError::EmptyGraph);
        }
        Ok(g)
    }

    pub fn pitch(&self) -> f64 {
        self.h
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    fn fine_at(&self, fi: usize, fj: usize) -> bool {
        self.fine[fj * (2 * self.nx - 1) + fi]
    }

    pub fn is_node(&self, i: usize, j: usize) -> bool {
        self.fine_at(2 * i, 2 * j)
    }

    pub fn node_count(&self) -> usize {
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .filter(|&(i, j)| self.is_node(i, j))
            .count()
    }

    pub fn node_point(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + i as f64 * self.h,
            self.origin.y + j as f64 * self.h,
        )
    }

    /// Usable neighbours of node `(i, j)` with their edge weights.
    pub fn neighbors(&self, i: usize, j: usize) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        MOVES.iter().filter_map(move |&(di, dj)| {
            let ni = i as i64 + di;
            let nj = j as i64 + dj;
            if ni < 0 || nj < 0 || ni >= self.nx as i64 || nj >= self.ny as i64 {
                return None;
            }
            let (ni, nj) = (ni as usize, nj as usize);
            let mid_i = (2 * i as i64 + di) as usize;
            let mid_j = (2 * j as i64 + dj) as usize;
            if !self.is_node(ni, nj) || !self.fine_at(mid_i, mid_j) {
                return None;
            }
            let w = if di != 0 && dj != 0 {
                self.h * SQRT_2
            } else {
                self.h
            };
            Some(((ni, nj), w))
        })
    }

    /// Nearest usable node within `2h` of `p` (ties: lower row, then column).
    pub fn snap(&self, p: Point) -> Result<((usize, usize), f64), OracleError> {
        self.snap_where(p, |_| true)
    }

    fn snap_where(&self, p: Point, accept: impl Fn(Point) -> bool) -> Result<((usize, usize), f64), OracleError> {
        let radius = 2.0 * self.h;
        let ci = ((p.x - self.origin.x) / self.h).round() as i64;
        let cj = ((p.y - self.origin.y) / self.h).round() as i64;
        let mut best: Option<((usize, usize), f64)> = None;
        for j in (cj - 3)..=(cj + 3) {
            for i in (ci - 3)..=(ci + 3) {
                if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
                    continue;
                }
                let (i, j) = (i as usize, j as usize);
                if !self.is_node(i, j) {
                    continue;
                }
                let d = self.node_point(i, j).dist(p);
                if d <= radius && best.is_none_or(|(_, bd)| d < bd) && accept(self.node_point(i, j)) {
                    best = Some(((i, j), d));
                }
            }
        }
        best.ok_or(OracleError::SnapFailed(p.x, p.y))
    }

    fn id(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    fn coords(&self, id: usize) -> (usize, usize) {
        (id % self.nx, id / self.nx)
    }

    /// Single-source Dijkstra from node `src`, stopping once `dst` is settled
    /// (or running to completion when `dst` is `None`).
    pub fn dijkstra(&self, src: (usize, usize), dst: Option<(usize, usize)>) -> (Vec<f64>, Vec<usize>) {
        self.dijkstra_with(src, dst, |_, _| true)
    }

    fn dijkstra_with(
        &self,
        src: (usize, usize),
        dst: Option<(usize, usize)>,
        edge_ok: impl Fn(Point, Point) -> bool,
    ) -> (Vec<f64>, Vec<usize>) {
        let n = self.nx * self.ny;
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        let s = self.id(src.0, src.1);
        let target = dst.map(|(i, j)| self.id(i, j));
        dist[s] = 0.0;
        heap.push(HeapItem { dist: 0.0, node: s });
        while let Some(HeapItem { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            if Some(node) == target {
                break;
            }
            let (i, j) = self.coords(node);
            for ((ni, nj), w) in self.neighbors(i, j) {
                let m = self.id(ni, nj);
                let nd = d + w;
                if nd < dist[m] && edge_ok(self.node_point(i, j), self.node_point(ni, nj)) {
                    dist[m] = nd;
                    prev[m] = node;
                    heap.push(HeapItem { dist: nd, node: m });
                }
            }
        }
        (dist, prev)
    }

    /// Shortest grid route between `a` and `b`, including the snap legs.
    pub fn shortest_path(&self, a: Point, b: Point) -> Result<OraclePath, OracleError> {
        let (sa, da) = self.snap(a)?;
        let (sb, db) = self.snap(b)?;
        let (dist, prev) = self.dijkstra(sa, Some(sb));
        self.trace((a, sa, da), (b, sb, db), &dist, &prev)
    }

    /// Shortest route using only edges and snap legs that are doubly covered
    /// along their whole length, so the returned polyline is too.
    pub fn shortest_path_certified(&self, c: &Covering, a: Point, b: Point, tol: f64) -> Result<OraclePath, OracleError> {
        let covered = |p: Point, q: Point| c.segment_min_coverage(p, q, tol) >= 2;
        let (sa, da) = self.snap_where(a, |n| covered(a, n))?;
        let (sb, db) = self.snap_where(b, |n| covered(n, b))?;
        let (dist, prev) = self.dijkstra_with(sa, Some(sb), covered);
        self.trace((a, sa, da), (b, sb, db), &dist, &prev)
    }

    /// Walks the predecessor tree back from the snapped end node.
    fn trace(
        &self,
        (a, sa, da): (Point, (usize, usize), f64),
        (b, sb, db): (Point, (usize, usize), f64),
        dist: &[f64],
        prev: &[usize],
    ) -> Result<OraclePath, OracleError> {
        let t = self.id(sb.0, sb.1);
        if !dist[t].is_finite() {
            return Err(OracleError::Unreachable);
        }
        let mut ids = vec![t];
        let s = self.id(sa.0, sa.1);
        let mut cur = t;
        while cur != s {
            cur = prev[cur];
            ids.push(cur);
        }
        ids.reverse();
        let mut polyline = Vec::with_capacity(ids.len() + 2);
        polyline.push(a);
        for id in ids {
            let (i, j) = self.coords(id);
            polyline.push(self.node_point(i, j));
        }
        polyline.push(b);
        Ok(OraclePath {
            length: da + dist[t] + db,
            polyline: simplify_collinear(&polyline),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OraclePath {
    pub length: f64,
    pub polyline: Vec<Point>,
}

/// Drops zero-length steps and interior vertices of straight runs.
fn simplify_collinear(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for &p in points {
        if out.last() == Some(&p) {
            continue;
        }
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            let cross = (b.x - a.x) * (p.y - b.y) - (b.y - a.y) * (p.x - b.x);
            let dot = (b.x - a.x) * (p.x - b.x) + (b.y - a.y) * (p.y - b.y);
            if cross.abs() <= 1e-12 && dot > 0.0 {
                out.pop();
            }
        }
        out.push(p);
    }
    if out.len() == 1 {
        out.push(out[0]);
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    // min-heap on distance, then node id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Builds the grid over `bbox` and runs a single query.
pub fn oracle_length(
    c: &Covering,
    bbox: BBox,
    h: f64,
    tol: f64,
    a: Point,
    b: Point,
) -> Result<OraclePath, OracleError> {
    GridGraph::build(c, bbox, h, tol)?.shortest_path(a, b)
}
