//! A state and a connected graph on which one equal-neighbor step increases
//! the sample variance, for every `n ≥ 8`.
//!
//! Nodes are 0-indexed here; the transcript prints them from 1. The base
//! graph on the first eight nodes has edges
//! `1–2, 1–3, 1–4, 1–5, 5–8, 6–8, 7–8`, and every extra node `k ≥ 9` is joined
//! to node 5, whose neighborhood values sum to zero, so `y_5 = y_k = 0`.

use std::fmt::Write as _;

use crate::consensus::{equal_neighbor_matrix, variance};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{Mat, Vector};
use crate::rat::Rat;

/// Base edges, 0-indexed.
pub const BASE_EDGES: [(usize, usize); 7] = [(0, 1), (0, 2), (0, 3), (0, 4), (4, 7), (5, 7), (6, 7)];
/// Node every extra node attaches to, 0-indexed.
pub const HUB: usize = 4;

const X_BASE: [i64; 8] = [5, 2, 2, 2, 0, -3, -3, -5];
const Y_BASE: [(i64, i64); 8] = [(11, 5), (7, 2), (7, 2), (7, 2), (0, 1), (-4, 1), (-4, 1), (-11, 4)];
/// Reference value quoted for the eight-coordinate bound; it does not equal
/// the exact sum, which is why only the inequality is asserted.
pub const QUOTED_BOUND: (i64, i64) = (10246, 127);

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub n: usize,
    pub graph: Graph,
    pub a: Mat<Rat>,
    pub x: Vector<Rat>,
    pub y: Vector<Rat>,
    pub vx: Rat,
    pub vy: Rat,
    /// `Σ_{i≤8} (y_i − ȳ₈)²`, a lower bound on `V(y)`.
    pub bound8: Rat,
}

pub fn counterexample_graph(n: usize) -> Result<Graph> {
    if n < 8 {
        return Err(Error::CounterexampleSize(n));
    }
    Graph::undirected(n, BASE_EDGES.into_iter().chain((8..n).map(|k| (HUB, k))))
}

pub fn expected_y(n: usize) -> Vector<Rat> {
    Vector::new((0..n).map(|i| Y_BASE.get(i).map_or_else(Rat::zero, |&(p, q)| Rat::new(p, q))).collect())
}

pub fn counterexample_state(n: usize) -> Vector<Rat> {
    Vector::new((0..n).map(|i| Rat::from_int(X_BASE.get(i).copied().unwrap_or(0))).collect())
}

/// Builds the graph, runs one exact step and checks every listed value.
pub fn counterexample(n: usize) -> Result<Counterexample> {
    let graph = counterexample_graph(n)?;
    if !graph.strongly_connected() {
        return Err(Error::Invalid("counterexample graph is disconnected".into()));
    }
    let a: Mat<Rat> = equal_neighbor_matrix(&graph);
    let x = counterexample_state(n);
    let y = a.mul_vec(&x)?;
    if y != expected_y(n) {
        return Err(Error::Invalid(format!("self-test failed: Ax = {y}, expected {}", expected_y(n))));
    }
    let vx = variance(&x);
    let vy = variance(&y);
    let bound8 = variance(&Vector::new(y.entries()[..8].to_vec()));
    if vx != Rat::from_int(80) || vy < bound8 || vy <= vx {
        return Err(Error::Invalid(format!("self-test failed: V(x) = {vx}, V(y) = {vy}")));
    }
    Ok(Counterexample { n, graph, a, x, y, vx, vy, bound8 })
}

impl Counterexample {
    pub fn verified(&self) -> bool {
        self.vy > self.vx
    }

    /// Human-readable proof transcript.
    pub fn transcript(&self) -> String {
        let mut s = String::new();
        let n = self.n;
        let _ = writeln!(s, "Sample variance V(x) = Σ (x_i − x̄)² under one equal-neighbor step, n = {n}");
        let _ = writeln!(s, "(nodes numbered 1..{n}; every node also hears itself)");
        let _ = writeln!(s);
        let edges: Vec<String> = self.graph.edges().iter().map(|(i, j)| format!("{}-{}", i + 1, j + 1)).collect();
        let _ = writeln!(s, "graph edges: {}", edges.join(", "));
        let _ = writeln!(s, "connected: {}", self.graph.strongly_connected());
        let degrees: Vec<String> = (0..n).map(|i| self.graph.in_degree(i).to_string()).collect();
        let _ = writeln!(s, "degrees d_i: {}", degrees.join(", "));
        let _ = writeln!(s);
        let _ = writeln!(s, "A =");
        let _ = write!(s, "{}", self.a);
        let _ = writeln!(s);
        let _ = writeln!(s, "x  = {}", self.x);
        let _ = writeln!(s, "y = Ax = {}", self.y);
        let _ = writeln!(s);
        let _ = writeln!(s, "V(x) = {}", self.vx);
        let _ = writeln!(s, "V(y) = {} ≈ {:.6}", self.vy, self.vy.to_f64());
        let (p, q) = QUOTED_BOUND;
        let quoted = Rat::new(p, q);
        let _ = writeln!(
            s,
            "bound Σ_{{i≤8}} (y_i − ȳ₈)² = {} ≈ {:.6} ≤ V(y)",
            self.bound8,
            self.bound8.to_f64()
        );
        let _ = writeln!(
            s,
            "note: the quoted value {quoted} ≈ {:.6} differs from the exact bound by {}; \
             both exceed V(x), and only V(y) > V(x) is asserted",
            quoted.to_f64(),
            &self.bound8 - &quoted
        );
        let _ = writeln!(s, "V(y) − V(x) = {} > 0: {}", &self.vy - &self.vx, self.verified());
        let _ = writeln!(s);
        if self.verified() {
            let _ = writeln!(s, "verdict: V ∉ 𝒬 (the variance is not a Lyapunov function for n = {n})");
        } else {
            let _ = writeln!(s, "verdict: NOT VERIFIED");
        }
        s
    }
}
