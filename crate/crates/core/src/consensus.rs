//! The agreement algorithm `x(t+1) = A(t) x(t)`.
//!
//! Graph sequences drive the equal-neighbor update, where agent `i` replaces
//! its value by the plain average over `N_i(t)`. Arbitrary stochastic matrix
//! sequences can be simulated directly with [`simulate_matrices`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::{edge_pairs, Graph};
use crate::matrix::{Mat, Vector};
use crate::rat::Rat;

/// `a_ij = 1/d_i` for `j ∈ N_i` (including `i` itself), zero elsewhere.
pub fn equal_neighbor_matrix<T: Field>(g: &Graph) -> Mat<T> {
    let n = g.n();
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        let nbrs = g.in_neighbors(i);
        let w = T::one() / T::from_int(nbrs.len() as i64);
        for j in nbrs {
            a[(i, j)] = w.clone();
        }
    }
    a
}

/// One update `A x`; `a` must be stochastic.
pub fn step<T: Field>(a: &Mat<T>, x: &Vector<T>) -> Result<Vector<T>> {
    a.require_stochastic()?;
    a.mul_vec(x)
}

pub fn span_norm<T: Field>(x: &Vector<T>) -> T {
    match (x.max(), x.min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => T::zero(),
    }
}

/// `V(x) = Σ (x_i − x̄)²`.
pub fn variance<T: Field>(x: &Vector<T>) -> T {
    if x.is_empty() {
        return T::zero();
    }
    let mean = x.sum() / T::from_int(x.len() as i64);
    x.iter().fold(T::zero(), |acc, v| {
        let d = v.clone() - mean.clone();
        acc + d.clone() * d
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    Finite(Vec<Graph>),
    Periodic(Vec<Graph>),
    Constant(Graph),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSequence {
    n: usize,
    kind: SequenceKind,
}

impl GraphSequence {
    pub fn new(n: usize, kind: SequenceKind) -> Result<Self> {
        let graphs: Vec<&Graph> = match &kind {
            SequenceKind::Finite(g) | SequenceKind::Periodic(g) => g.iter().collect(),
            SequenceKind::Constant(g) => vec![g],
        };
        if matches!(kind, SequenceKind::Periodic(ref g) if g.is_empty()) {
            return Err(Error::InvalidGraph("periodic sequence needs at least one graph".into()));
        }
        if let Some(g) = graphs.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch { expected: format!("{n} nodes"), found: format!("{} nodes", g.n()) });
        }
        Ok(GraphSequence { n, kind })
    }

    pub fn constant(g: Graph) -> Self {
        GraphSequence { n: g.n(), kind: SequenceKind::Constant(g) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// `G(t)`, or `None` past the end of a finite sequence.
    pub fn graph_at(&self, t: usize) -> Option<&Graph> {
        match &self.kind {
            SequenceKind::Finite(g) => g.get(t),
            SequenceKind::Periodic(g) => Some(&g[t % g.len()]),
            SequenceKind::Constant(g) => Some(g),
        }
    }

    /// Number of graphs for finite sequences.
    pub fn horizon(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::Finite(g) => Some(g.len()),
            _ => None,
        }
    }

    /// Number of windows whose alignment differs, for non-finite sequences:
    /// window `k` starts at `kB`, which is periodic in `k` with period at most
    /// the sequence period.
    pub fn distinct_windows(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::Finite(_) => None,
            SequenceKind::Periodic(g) => Some(g.len()),
            SequenceKind::Constant(_) => Some(1),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            SequenceKind::Finite(g) | SequenceKind::Periodic(g) => g.iter().all(Graph::is_symmetric),
            SequenceKind::Constant(g) => g.is_symmetric(),
        }
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, SequenceFileError> {
        let file: SequenceFile = serde_json::from_str(s).map_err(SequenceFileError::Json)?;
        file.into_sequence().map_err(SequenceFileError::Invalid)
    }

    pub fn to_file(&self) -> SequenceFile {
        let symmetric = self.is_symmetric();
        let spec = |g: &Graph| GraphSpec {
            edges: if symmetric { g.edges() } else { g.arcs().collect() }.into_iter().map(|(a, b)| [a, b]).collect(),
        };
        let (kind, graphs) = match &self.kind {
            SequenceKind::Finite(g) => (KindTag::Finite, g.iter().map(spec).collect()),
            SequenceKind::Periodic(g) => (KindTag::Periodic, g.iter().map(spec).collect()),
            SequenceKind::Constant(g) => (KindTag::Constant, vec![spec(g)]),
        };
        SequenceFile {
            n: self.n,
            mode: if symmetric { ModeTag::Symmetric } else { ModeTag::Directed },
            kind,
            graphs,
        }
    }
}

#[derive(Debug)]
pub enum SequenceFileError {
    Json(serde_json::Error),
    Invalid(Error),
}

impl std::fmt::Display for SequenceFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SequenceFileError::Json(e) => write!(f, "{e}"),
            SequenceFileError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SequenceFileError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeTag {
    Symmetric,
    Directed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Finite,
    Periodic,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub edges: Vec<[usize; 2]>,
}

/// On-disk form of a [`GraphSequence`] (0-indexed nodes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub n: usize,
    pub mode: ModeTag,
    pub kind: KindTag,
    pub graphs: Vec<GraphSpec>,
}

impl SequenceFile {
    pub fn into_sequence(self) -> Result<GraphSequence> {
        let n = self.n;
        let graphs = self
            .graphs
            .into_iter()
            .map(|g| {
                let pairs = g.edges.into_iter().map(|[a, b]| (a, b));
                match self.mode {
                    ModeTag::Symmetric => Graph::undirected(n, pairs),
                    ModeTag::Directed => Graph::directed(n, pairs),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let kind = match self.kind {
            KindTag::Finite => SequenceKind::Finite(graphs),
            KindTag::Periodic => SequenceKind::Periodic(graphs),
            KindTag::Constant => {
                let [g]: [Graph; 1] = graphs
                    .try_into()
                    .map_err(|_| Error::InvalidGraph("constant sequence needs exactly one graph".into()))?;
                SequenceKind::Constant(g)
            }
        };
        GraphSequence::new(n, kind)
    }
}

/// Seeded random symmetric sequence: each step draws every edge independently
/// with probability `edge_prob`. With `window = Some(B)`, edges are added to
/// the last graph of any window `[kB, (k+1)B]` whose union is disconnected, so
/// the result satisfies bounded intercommunication intervals by construction.
/// With `connected_each_step`, each graph is redrawn until connected.
pub fn random_sequence<R: Rng + ?Sized>(
    n: usize,
    len: usize,
    edge_prob: f64,
    window: Option<usize>,
    connected_each_step: bool,
    rng: &mut R,
) -> GraphSequence {
    let pairs = edge_pairs(n);
    let draw = |rng: &mut R| -> Vec<(usize, usize)> {
        loop {
            let edges: Vec<_> = pairs.iter().copied().filter(|_| rng.gen_bool(edge_prob)).collect();
            let g = Graph::undirected(n, edges.iter().copied()).expect("valid");
            if !connected_each_step || g.strongly_connected() {
                return edges;
            }
        }
    };
    let mut edge_lists: Vec<Vec<(usize, usize)>> = Vec::with_capacity(len);
    for t in 0..len {
        edge_lists.push(draw(rng));
        let Some(b) = window else { continue };
        if t >= b && t % b == 0 {
            let start = t - b;
            let union = Graph::undirected(n, edge_lists[start..=t].iter().flatten().copied()).expect("valid");
            for (a, c) in bridging_edges(&union, rng) {
                edge_lists[t].push((a, c));
            }
        }
    }
    let graphs = edge_lists.into_iter().map(|e| Graph::undirected(n, e).expect("valid")).collect();
    GraphSequence { n, kind: SequenceKind::Finite(graphs) }
}

/// Random edges joining the components of `g` into one.
fn bridging_edges<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = reps.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for (v, c) in comp.iter_mut().enumerate() {
                if *c == usize::MAX && g.has_arc(u, v) {
                    *c = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        reps.push(members);
    }
    reps.windows(2)
        .map(|w| {
            let a = w[0][rng.gen_range(0..w[0].len())];
            let b = w[1][rng.gen_range(0..w[1].len())];
            (a, b)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub states: Vec<Vector<T>>,
    pub matrices_used: Vec<Mat<T>>,
}

impl<T: Field> Trajectory<T> {
    pub fn spans(&self) -> Vec<T> {
        self.states.iter().map(span_norm).collect()
    }

    /// CSV with columns `t, x_1..x_n, span, variance`.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, Vector::len);
        let mut out = String::from("t");
        for i in 1..=n {
            out.push_str(&format!(",x_{i}"));
        }
        out.push_str(",span,variance\n");
        for (t, x) in self.states.iter().enumerate() {
            out.push_str(&t.to_string());
            for v in x.iter() {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(",{},{}\n", span_norm(x), variance(x)));
        }
        out
    }
}

/// Runs `t_max` equal-neighbor steps from `x0`.
pub fn simulate<T: Field>(seq: &GraphSequence, x0: &Vector<T>, t_max: usize) -> Result<Trajectory<T>> {
    if x0.len() != seq.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("initial state of length {}", seq.n()),
            found: format!("length {}", x0.len()),
        });
    }
    if let Some(len) = seq.horizon() {
        if len < t_max {
            return Err(Error::SequenceTooShort { len, needed: t_max });
        }
    }
    let matrices: Vec<Mat<T>> =
        (0..t_max).map(|t| equal_neighbor_matrix(seq.graph_at(t).expect("within horizon"))).collect();
    simulate_matrices(&matrices, x0)
}

/// Runs `x(t+1) = A(t) x(t)` over an explicit list of stochastic matrices.
pub fn simulate_matrices<T: Field>(matrices: &[Mat<T>], x0: &Vector<T>) -> Result<Trajectory<T>> {
    let mut states = Vec::with_capacity(matrices.len() + 1);
    states.push(x0.clone());
    for a in matrices {
        let next = step(a, states.last().expect("nonempty"))?;
        states.push(next);
    }
    Ok(Trajectory { states, matrices_used: matrices.to_vec() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConsensusOutcome<T> {
    Converged { limit: T, t_hit: usize },
    NotConverged { final_span: T },
}

/// First time the span norm drops to `tol`; the limit estimate is the
/// midpoint of the values at that time.
pub fn detect_consensus<T: Field>(traj: &Trajectory<T>, tol: &T) -> ConsensusOutcome<T> {
    for (t, x) in traj.states.iter().enumerate() {
        if span_norm(x) <= *tol {
            let (hi, lo) = (x.max().unwrap_or_else(T::zero), x.min().unwrap_or_else(T::zero));
            return ConsensusOutcome::Converged { limit: (hi + lo) / T::from_int(2), t_hit: t };
        }
    }
    ConsensusOutcome::NotConverged { final_span: traj.states.last().map_or_else(T::zero, span_norm) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionConfig {
    alpha: Rat,
    window: usize,
}

impl AssumptionConfig {
    pub fn new(alpha: Rat, window: usize) -> Result<Self> {
        if !alpha.is_positive() || alpha > Rat::one() {
            return Err(Error::Invalid(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if window == 0 {
            return Err(Error::Invalid("window length B must be at least 1".into()));
        }
        Ok(AssumptionConfig { alpha, window })
    }

    pub fn alpha(&self) -> &Rat {
        &self.alpha
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientViolation {
    pub t: usize,
    pub i: usize,
    pub j: usize,
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumption1Report {
    pub passed: bool,
    pub steps_checked: usize,
    pub violations: Vec<CoefficientViolation>,
}

/// Every nonzero coefficient `a_ij(t)` over the horizon is at least `alpha`.
pub fn check_assumption1(seq: &GraphSequence, cfg: &AssumptionConfig, t_max: usize) -> Assumption1Report {
    let steps = seq.horizon().map_or(t_max, |h| h.min(t_max));
    let matrices: Vec<Mat<Rat>> = (0..steps).map(|t| equal_neighbor_matrix(seq.graph_at(t).expect("in range"))).collect();
    check_assumption1_matrices(&matrices, cfg)
}

pub fn check_assumption1_matrices(matrices: &[Mat<Rat>], cfg: &AssumptionConfig) -> Assumption1Report {
    let mut violations = Vec::new();
    for (t, a) in matrices.iter().enumerate() {
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let v = &a[(i, j)];
                if !v.is_zero() && *v < cfg.alpha {
                    violations.push(CoefficientViolation { t, i, j, value: v.clone() });
                }
            }
        }
    }
    Assumption1Report { passed: violations.is_empty(), steps_checked: matrices.len(), violations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumption2Report {
    pub passed: bool,
    pub windows_checked: usize,
    pub first_failure: Option<usize>,
}

/// For each window `k ∈ {0, …, k_max}`, the union of `G(kB), …, G((k+1)B)` is
/// strongly connected. Windows reaching past the end of a finite sequence
/// are not checked.
pub fn check_assumption2(seq: &GraphSequence, cfg: &AssumptionConfig, k_max: usize) -> Assumption2Report {
    let b = cfg.window;
    let mut checked = 0;
    for k in 0..=k_max {
        let (start, end) = (k * b, (k + 1) * b);
        if seq.horizon().is_some_and(|h| end >= h) {
            break;
        }
        let union = Graph::union((start..=end).map(|t| seq.graph_at(t).expect("in range"))).expect("same n");
        checked += 1;
        if !union.strongly_connected() {
            return Assumption2Report { passed: false, windows_checked: checked, first_failure: Some(k) };
        }
    }
    Assumption2Report { passed: checked > 0, windows_checked: checked, first_failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat_vec;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn complete_graph_matrix() {
        let a: Mat<Rat> = equal_neighbor_matrix(&Graph::complete(3));
        assert!(a.entries().iter().all(|v| *v == r(1, 3)));
    }

    #[test]
    fn single_edge_matrix() {
        let a: Mat<Rat> = equal_neighbor_matrix(&Graph::undirected(2, [(0, 1)]).unwrap());
        assert!(a.entries().iter().all(|v| *v == r(1, 2)));
    }

    #[test]
    fn fixed_points_and_averaging() {
        let g = Graph::undirected(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let a: Mat<Rat> = equal_neighbor_matrix(&g);
        assert!(a.is_stochastic().unwrap());
        let c = Vector::ones(4).scale(&r(-7, 3));
        assert_eq!(step(&a, &c).unwrap(), c);
        let k: Mat<Rat> = equal_neighbor_matrix(&Graph::complete(4));
        assert_eq!(step(&k, &rat_vec(&[1, 2, 3, 6])).unwrap(), rat_vec(&[3, 3, 3, 3]));
    }

    #[test]
    fn step_rejects_non_stochastic() {
        let bad = Mat::from_fn(2, 2, |_, _| r(1, 3));
        assert_eq!(step(&bad, &rat_vec(&[1, 1])), Err(Error::NotStochastic));
    }

    #[test]
    fn observables() {
        assert_eq!(span_norm(&Vector::<Rat>::ones(5)), Rat::zero());
        assert_eq!(variance(&Vector::<Rat>::ones(5)), Rat::zero());
        let x = rat_vec(&[5, 2, 2, 2, 0, -3, -3, -5]);
        assert_eq!(span_norm(&x), Rat::from_int(10));
        assert_eq!(variance(&x), Rat::from_int(80));
        let y = Vector::new(vec![r(11, 5), r(7, 2), r(7, 2), r(7, 2), r(0, 1), r(-4, 1), r(-4, 1), r(-11, 4)]);
        assert_eq!(variance(&y), r(258167, 3200));
    }

    #[test]
    fn alternating_edges_contract() {
        let seq = GraphSequence::new(
            3,
            SequenceKind::Periodic(vec![
                Graph::undirected(3, [(0, 1)]).unwrap(),
                Graph::undirected(3, [(1, 2)]).unwrap(),
            ]),
        )
        .unwrap();
        let traj = simulate(&seq, &rat_vec(&[1, 0, 0]), 12).unwrap();
        let spans = traj.spans();
        for t in (0..=10).step_by(2) {
            assert!(spans[t + 2] < spans[t], "t = {t}: {} !< {}", spans[t + 2], spans[t]);
        }
        let cfg = AssumptionConfig::new(r(1, 2), 2).unwrap();
        let rep = check_assumption2(&seq, &cfg, 4);
        assert!(rep.passed);
        assert_eq!(rep.windows_checked, 5);
    }

    #[test]
    fn disconnected_graph_never_agrees() {
        let g = Graph::undirected(4, [(0, 1), (2, 3)]).unwrap();
        let seq = GraphSequence::constant(g);
        let traj = simulate(&seq, &rat_vec(&[1, 1, 0, 0]), 20).unwrap();
        assert!(traj.spans().iter().all(|s| *s == Rat::one()));
        assert!(matches!(detect_consensus(&traj, &r(1, 1000)), ConsensusOutcome::NotConverged { .. }));
        let cfg = AssumptionConfig::new(r(1, 4), 3).unwrap();
        assert_eq!(check_assumption2(&seq, &cfg, 5).first_failure, Some(0));
    }

    #[test]
    fn complete_graph_converges_in_one_step() {
        let seq = GraphSequence::constant(Graph::complete(4));
        let traj = simulate(&seq, &rat_vec(&[4, 0, 1, 7]), 3).unwrap();
        assert_eq!(
            detect_consensus(&traj, &Rat::zero()),
            ConsensusOutcome::Converged { limit: Rat::from_int(3), t_hit: 1 }
        );
        let cfg = AssumptionConfig::new(r(1, 4), 1).unwrap();
        assert!(check_assumption2(&seq, &cfg, 0).passed);
    }

    #[test]
    fn assumption1_thresholds() {
        let seq = GraphSequence::constant(Graph::complete(4));
        assert!(check_assumption1(&seq, &AssumptionConfig::new(r(1, 4), 1).unwrap(), 5).passed);
        let rep = check_assumption1(&seq, &AssumptionConfig::new(r(1, 3), 1).unwrap(), 1);
        assert!(!rep.passed);
        assert!(rep.violations.iter().all(|v| v.value == r(1, 4)));
        assert_eq!(rep.violations.len(), 16);
    }

    #[test]
    fn config_validation() {
        assert!(AssumptionConfig::new(Rat::zero(), 1).is_err());
        assert!(AssumptionConfig::new(r(3, 2), 1).is_err());
        assert!(AssumptionConfig::new(r(1, 2), 0).is_err());
    }

    #[test]
    fn finite_sequence_too_short() {
        let seq = GraphSequence::new(2, SequenceKind::Finite(vec![Graph::complete(2)])).unwrap();
        assert_eq!(
            simulate(&seq, &rat_vec(&[0, 1]), 3).unwrap_err(),
            Error::SequenceTooShort { len: 1, needed: 3 }
        );
    }

    #[test]
    fn sequence_file_parsing() {
        let s = r#"{"n": 3, "mode": "symmetric", "kind": "periodic", "graphs": [{"edges": [[0,1]]}, {"edges": [[1,2]]}]}"#;
        let seq = GraphSequence::from_json_str(s).unwrap();
        assert_eq!(seq.graph_at(3).unwrap().edges(), vec![(1, 2)]);
        let back = serde_json::to_string(&seq.to_file()).unwrap();
        assert_eq!(GraphSequence::from_json_str(&back).unwrap(), seq);

        let self_loop = r#"{"n": 2, "mode": "symmetric", "kind": "constant", "graphs": [{"edges": [[1,1]]}]}"#;
        assert!(matches!(GraphSequence::from_json_str(self_loop), Err(SequenceFileError::Invalid(_))));
        let two_constant = r#"{"n": 2, "mode": "symmetric", "kind": "constant", "graphs": [{"edges": []}, {"edges": []}]}"#;
        assert!(GraphSequence::from_json_str(two_constant).is_err());
        assert!(matches!(GraphSequence::from_json_str("{\"n\": 2"), Err(SequenceFileError::Json(_))));
    }

    #[test]
    fn directed_sequences() {
        let s = r#"{"n": 3, "mode": "directed", "kind": "constant", "graphs": [{"edges": [[0,1],[1,2],[2,0]]}]}"#;
        let seq = GraphSequence::from_json_str(s).unwrap();
        assert!(!seq.is_symmetric());
        let a: Mat<Rat> = equal_neighbor_matrix(seq.graph_at(0).unwrap());
        // node 1 hears 0 and itself
        assert_eq!(a.row(1), &[r(1, 2), r(1, 2), r(0, 1)]);
        let cfg = AssumptionConfig::new(r(1, 2), 1).unwrap();
        assert!(check_assumption2(&seq, &cfg, 0).passed);
    }

    #[test]
    fn trajectory_csv() {
        let seq = GraphSequence::constant(Graph::complete(2));
        let traj = simulate(&seq, &rat_vec(&[0, 1]), 1).unwrap();
        assert_eq!(traj.to_csv(), "t,x_1,x_2,span,variance\n0,0,1,1,1/2\n1,1/2,1/2,0,0\n");
    }

    #[test]
    fn random_sequences_meet_window_connectivity() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let seq = random_sequence(6, 200, 0.1, Some(5), false, &mut rng);
        let cfg = AssumptionConfig::new(r(1, 6), 5).unwrap();
        let rep = check_assumption2(&seq, &cfg, 1000);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.windows_checked, 39);
        let connected = random_sequence(5, 10, 0.3, None, true, &mut rng);
        for t in 0..10 {
            assert!(connected.graph_at(t).unwrap().strongly_connected());
        }
    }
}
