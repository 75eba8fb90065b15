//! Equal-neighbor matrices of connected symmetric graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::consensus::equal_neighbor_matrix;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::{edge_pairs, mask_connected, Graph};
use crate::matrix::Mat;
use crate::rat::Rat;

/// Largest `n` enumerated exhaustively; beyond it graphs are sampled.
pub const EXHAUSTIVE_LIMIT: usize = 7;

/// Stochastic, positive diagonal, equal positive entries within each row,
/// symmetric zero pattern, and a connected pattern graph.
pub fn is_class_a_member<T: Field>(a: &Mat<T>) -> bool {
    let Ok(n) = a.require_square() else { return false };
    if !matches!(a.is_stochastic(), Ok(true)) {
        return false;
    }
    let zero = T::zero();
    for i in 0..n {
        if a[(i, i)] <= zero {
            return false;
        }
        let row = a.row(i);
        if row.iter().any(|v| *v > zero && *v != a[(i, i)]) {
            return false;
        }
        if (0..n).any(|j| (a[(i, j)] > zero) != (a[(j, i)] > zero)) {
            return false;
        }
    }
    let edges = edge_pairs(n).into_iter().filter(|&(i, j)| a[(i, j)] > zero);
    Graph::undirected(n, edges).map(|g| g.strongly_connected()).unwrap_or(false)
}

/// Streams connected labeled graphs on `n` nodes with their equal-neighbor
/// matrices: every one of them, in edge-mask order, for `n ≤ 7`; `cap` seeded
/// uniform samples (uniform edge subsets conditioned on connectivity) beyond.
pub fn enumerate_class_a(
    n: usize,
    cap: usize,
    seed: u64,
) -> Result<Box<dyn Iterator<Item = (Graph, Mat<Rat>)> + Send>> {
    if n < 2 {
        return Err(Error::Invalid(format!("class enumeration needs n >= 2, got {n}")));
    }
    if n <= EXHAUSTIVE_LIMIT {
        let pairs = edge_pairs(n);
        let total = 1u64 << pairs.len();
        let iter = (0..total)
            .filter(move |&mask| mask_connected(n, mask, &pairs))
            .map(move |mask| {
                let g = Graph::from_edge_mask(n, mask);
                let a = equal_neighbor_matrix(&g);
                (g, a)
            })
            .take(cap);
        return Ok(Box::new(iter));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = edge_pairs(n);
    let iter = std::iter::repeat_with(move || loop {
        let edges: Vec<_> = pairs.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let g = Graph::undirected(n, edges).expect("valid pairs");
        if g.strongly_connected() {
            let a = equal_neighbor_matrix(&g);
            return (g, a);
        }
    })
    .take(cap);
    Ok(Box::new(iter))
}
