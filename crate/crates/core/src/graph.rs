//! Communication graphs on nodes `0..n`.
//!
//! An arc `(j, i)` means agent `i` receives the value of agent `j`. Self-loops
//! are implicit: every node always hears itself and listing `(i, i)` is an
//! error. A symmetric graph stores each undirected edge as both arcs.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
    symmetric: bool,
}

impl Graph {
    /// Undirected graph from edge pairs `{i, j}`.
    pub fn undirected(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut arcs = BTreeSet::new();
        for (i, j) in edges {
            check_pair(n, i, j)?;
            arcs.insert((i, j));
            arcs.insert((j, i));
        }
        Ok(Graph { n, arcs, symmetric: true })
    }

    /// Directed graph from arcs `(from, to)`.
    pub fn directed(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (j, i) in arcs {
            check_pair(n, j, i)?;
            set.insert((j, i));
        }
        Ok(Graph { n, arcs: set, symmetric: false })
    }

    /// Graph with only the implicit self-loops.
    pub fn empty(n: usize) -> Self {
        Graph { n, arcs: BTreeSet::new(), symmetric: true }
    }

    pub fn complete(n: usize) -> Self {
        Self::undirected(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Self::undirected(n, (1..n).map(|i| (i - 1, i))).expect("valid")
    }

    /// Star centred at node 0.
    pub fn star(n: usize) -> Self {
        Self::undirected(n, (1..n).map(|i| (0, i))).expect("valid")
    }

    /// Directed cycle `0 → 1 → … → n−1 → 0`.
    pub fn directed_cycle(n: usize) -> Self {
        Self::directed(n, (0..n).filter(|_| n > 1).map(|i| (i, (i + 1) % n))).expect("valid")
    }

    /// Undirected graph whose edges are the set bits of `mask` over the
    /// lexicographic pair order `(0,1), (0,2), …, (n−2,n−1)`.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let edges = edge_pairs(n).into_iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| e);
        Self::undirected(n, edges).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric || self.arcs.iter().all(|&(a, b)| self.arcs.contains(&(b, a)))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    /// Undirected edges `(i, j)` with `i < j`, for symmetric graphs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().copied().filter(|&(a, b)| a < b && self.arcs.contains(&(b, a))).collect()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        from == to || self.arcs.contains(&(from, to))
    }

    /// `N_i`: the nodes `i` hears from, itself included, in increasing order.
    pub fn in_neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.has_arc(j, i)).collect()
    }

    /// `d_i = |N_i|`.
    pub fn in_degree(&self, i: usize) -> usize {
        1 + self.arcs.iter().filter(|&&(j, t)| t == i && j != i).count()
    }

    /// Union of arc sets over graphs sharing `n`.
    pub fn union<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> Result<Graph> {
        let mut it = graphs.into_iter();
        let first = it.next().ok_or_else(|| Error::InvalidGraph("union of no graphs".into()))?;
        let mut out = first.clone();
        for g in it {
            if g.n != out.n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{} nodes", out.n),
                    found: format!("{} nodes", g.n),
                });
            }
            out.arcs.extend(g.arcs.iter().copied());
            out.symmetric &= g.symmetric;
        }
        Ok(out)
    }

    fn reach(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.arcs {
            if forward {
                adj[a].push(b);
            } else {
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !std::mem::replace(&mut seen[v], true) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Every node reaches every other node along arcs.
    pub fn strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.reach(0, true).into_iter().all(|v| v) && self.reach(0, false).into_iter().all(|v| v)
    }

    /// Connectivity ignoring arc direction.
    pub fn weakly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let sym = Graph::undirected(self.n, self.arcs.iter().copied()).expect("valid");
        sym.strongly_connected()
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= n || j >= n {
        return Err(Error::InvalidGraph(format!("edge ({i}, {j}) out of range for n = {n}")));
    }
    if i == j {
        return Err(Error::InvalidGraph(format!("self-loop ({i}, {i}) listed; self-loops are implicit")));
    }
    Ok(())
}

/// Unordered node pairs in lexicographic order.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Connectivity of the undirected graph given by an edge bitmask, without
/// building a [`Graph`].
pub fn mask_connected(n: usize, mask: u64, pairs: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut adj = vec![0u32; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
    }
    let full = (1u32 << n) - 1;
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == full
}
