//! Averaging a quadratic form over all node relabelings.
//!
//! `Z = Σ_P PᵀMP` is invariant under every relabeling, which forces a constant
//! diagonal and a constant off-diagonal. With `Ze = 0` the two constants are
//! tied together and `Z` is a multiple of the variance matrix.

use rayon::iter::{ParallelBridge, ParallelIterator};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::perm::all_permutations;
use crate::rat::Rat;

/// Largest `n` accepted by the explicit `n!`-term sum.
pub const EXPLICIT_LIMIT: usize = 9;

/// `Z = Σ_{P} Pᵀ M P` over all `n!` permutation matrices, summed term by term.
pub fn symmetrize(m: &Mat<Rat>) -> Result<Mat<Rat>> {
    let n = m.require_square()?;
    if n > EXPLICIT_LIMIT {
        return Err(Error::TooLarge { n, limit: EXPLICIT_LIMIT });
    }
    // exact sums are order independent, so the parallel reduction is deterministic
    Ok(all_permutations(n)
        .par_bridge()
        .fold(|| Mat::zeros(n, n), |acc: Mat<Rat>, p| acc.add(&p.congruence(m)).expect("same shape"))
        .reduce(|| Mat::zeros(n, n), |a, b| a.add(&b).expect("same shape")))
}

fn factorial(k: usize) -> Rat {
    Rat::from_int((1..=k as i64).product())
}

/// `Z = (n−1)!·tr(M)·I + (n−2)!·s·(eeᵀ − I)` where `s` is the sum of the
/// off-diagonal entries of `M`.
pub fn symmetrize_closed_form(m: &Mat<Rat>) -> Result<Mat<Rat>> {
    let n = m.require_square()?;
    if n < 2 {
        return Ok(m.clone());
    }
    let off: Rat = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| m[(i, j)].clone()).sum();
    let diag = factorial(n - 1) * m.trace();
    let rest = factorial(n - 2) * off;
    Ok(Mat::from_fn(n, n, |i, j| if i == j { diag.clone() } else { rest.clone() }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Proportionality {
    /// `Z = α·C` with `C = I − eeᵀ/n`.
    Proportional { alpha: Rat },
    /// Two entries that should agree but do not, or the row-sum identity
    /// `z + (n−1)r = 0` failing (reported as the first diagonal and
    /// off-diagonal positions).
    NotProportional { first: (usize, usize), second: (usize, usize), reason: String },
}

/// Decides whether `z` has the invariant shape `α·C` and recovers `α`.
pub fn invariant_form_decompose(z: &Mat<Rat>) -> Result<Proportionality> {
    let n = z.require_symmetric()?;
    if n < 2 {
        return Err(Error::Invalid("decomposition needs n >= 2".into()));
    }
    let zd = &z[(0, 0)];
    if let Some(i) = (1..n).find(|&i| z[(i, i)] != *zd) {
        return Ok(Proportionality::NotProportional {
            first: (0, 0),
            second: (i, i),
            reason: "diagonal not constant".into(),
        });
    }
    let r = &z[(0, 1)];
    for i in 0..n {
        for j in 0..n {
            if i != j && z[(i, j)] != *r {
                return Ok(Proportionality::NotProportional {
                    first: (0, 1),
                    second: (i, j),
                    reason: "off-diagonal not constant".into(),
                });
            }
        }
    }
    let n_rat = Rat::from_int(n as i64);
    let n1 = Rat::from_int(n as i64 - 1);
    if !(zd + &(&n1 * r)).is_zero() {
        return Ok(Proportionality::NotProportional {
            first: (0, 0),
            second: (0, 1),
            reason: "rows do not sum to zero".into(),
        });
    }
    Ok(Proportionality::Proportional { alpha: zd * &n_rat / n1 })
}
