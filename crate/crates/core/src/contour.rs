//! Level-set extraction on a uniform grid.
//!
//! Marching squares locates sign changes of `f` on cell edges, saddle cells are
//! resolved by the sign at the cell center, and segments are linked through
//! the edges they share. Every vertex is then polished by a bracketed root
//! search along its own cell edge, so it stays on the correct branch.

use std::collections::HashMap;

use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn square(half_width: f64) -> Self {
        Window { x_min: -half_width, x_max: half_width, y_min: -half_width, y_max: half_width }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    /// Closed loops repeat no point; the last vertex connects to the first.
    pub closed: bool,
}

impl Polyline {
    pub fn min_distance_to(&self, x: f64, y: f64) -> f64 {
        self.points
            .iter()
            .map(|&(px, py)| (px - x).hypot(py - y))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    /// Between nodes (i, j) and (i + 1, j).
    H(usize, usize),
    /// Between nodes (i, j) and (i, j + 1).
    V(usize, usize),
}

struct Field {
    win: Window,
    n: usize,
    values: Vec<f64>,
}

impl Field {
    fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let t = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * k as f64 / self.n as f64;
        (t(i, self.win.x_min, self.win.x_max), t(j, self.win.y_min, self.win.y_max))
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.n + 1) + i]
    }

    fn endpoints(&self, e: Edge) -> ((usize, usize), (usize, usize)) {
        match e {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        }
    }

    fn on_boundary(&self, e: Edge) -> bool {
        match e {
            Edge::H(_, j) => j == 0 || j == self.n,
            Edge::V(i, _) => i == 0 || i == self.n,
        }
    }
}

/// Illinois (modified regula falsi) on `g(t)`, `t ∈ [0, 1]`, with a sign change.
fn illinois(g: impl Fn(f64) -> f64, mut ga: f64, mut gb: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (0.0, 1.0);
    let mut side = 0i8;
    let mut t = 0.5;
    for _ in 0..100 {
        t = (a * gb - b * ga) / (gb - ga);
        if !(t > a && t < b) {
            t = 0.5 * (a + b);
        }
        let gt = g(t);
        if gt.abs() <= tol || (b - a) < 1e-15 {
            return t;
        }
        if (gt > 0.0) == (gb > 0.0) {
            b = t;
            gb = gt;
            if side == -1 {
                ga *= 0.5;
            }
            side = -1;
        } else {
            a = t;
            ga = gt;
            if side == 1 {
                gb *= 0.5;
            }
            side = 1;
        }
    }
    t
}

/// Trace `f(x, y) = 0` on an `n × n` cell grid over `win`. Vertices are refined
/// until `|f| ≤ tol` (or the edge bracket collapses).
pub fn trace<F>(f: F, win: Window, n: usize, tol: f64) -> Vec<Polyline>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    assert!(n >= 2, "grid needs at least 2 cells per side");
    let mut field = Field { win, n, values: Vec::new() };
    field.values = (0..(n + 1) * (n + 1))
        .into_par_iter()
        .map(|k| {
            let (x, y) = field.node(k % (n + 1), k / (n + 1));
            f(x, y)
        })
        .collect();

    let pos = |v: f64| v >= 0.0;
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let a = field.value(i, j);
            let b = field.value(i + 1, j);
            let c = field.value(i + 1, j + 1);
            let d = field.value(i, j + 1);
            let bottom = Edge::H(i, j);
            let right = Edge::V(i + 1, j);
            let top = Edge::H(i, j + 1);
            let left = Edge::V(i, j);
            let mut cut = Vec::with_capacity(4);
            if pos(a) != pos(b) {
                cut.push(bottom);
            }
            if pos(b) != pos(c) {
                cut.push(right);
            }
            if pos(c) != pos(d) {
                cut.push(top);
            }
            if pos(d) != pos(a) {
                cut.push(left);
            }
            match cut.len() {
                2 => segments.push((cut[0], cut[1])),
                4 => {
                    let (cx, cy) = field.node(i, j);
                    let h = (win.x_max - win.x_min) / n as f64;
                    let k = (win.y_max - win.y_min) / n as f64;
                    if pos(f(cx + 0.5 * h, cy + 0.5 * k)) == pos(a) {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => {}
            }
        }
    }

    let mut incident: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (s, &(e0, e1)) in segments.iter().enumerate() {
        incident.entry(e0).or_default().push(s);
        incident.entry(e1).or_default().push(s);
    }

    let mut used = vec![false; segments.len()];
    let mut chains: Vec<(Vec<Edge>, bool)> = Vec::new();
    let walk = |start_seg: usize, start_edge: Edge, used: &mut Vec<bool>| {
        let mut chain = vec![start_edge];
        let mut seg = start_seg;
        let mut at = start_edge;
        loop {
            used[seg] = true;
            let (e0, e1) = segments[seg];
            let next = if e0 == at { e1 } else { e0 };
            if next == start_edge {
                return (chain, true);
            }
            chain.push(next);
            at = next;
            match incident[&next].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => return (chain, false),
            }
        }
    };
    // open chains start at a boundary edge
    let mut starts: Vec<Edge> = incident
        .iter()
        .filter(|(e, segs)| segs.len() == 1 && field.on_boundary(**e))
        .map(|(e, _)| *e)
        .collect();
    starts.sort_by_key(|e| match *e {
        Edge::H(i, j) => (j, i, 0),
        Edge::V(i, j) => (j, i, 1),
    });
    for e in starts {
        let s = incident[&e][0];
        if !used[s] {
            chains.push(walk(s, e, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            chains.push(walk(s, segments[s].0, &mut used));
        }
    }

    chains
        .into_iter()
        .map(|(edges, closed)| {
            let points = edges
                .par_iter()
                .map(|&e| {
                    let ((i0, j0), (i1, j1)) = field.endpoints(e);
                    let (x0, y0) = field.node(i0, j0);
                    let (x1, y1) = field.node(i1, j1);
                    let (f0, f1) = (field.value(i0, j0), field.value(i1, j1));
                    let at = |t: f64| (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
                    let t = if f0 == 0.0 {
                        0.0
                    } else if f1 == 0.0 {
                        1.0
                    } else {
                        illinois(|t| { let (x, y) = at(t); f(x, y) }, f0, f1, tol)
                    };
                    at(t)
                })
                .collect();
            Polyline { points, closed }
        })
        .collect()
}
