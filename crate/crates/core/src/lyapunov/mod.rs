//! Quadratic Lyapunov functions `Q(x) = xᵀ M x` for equal-neighbor dynamics.
//!
//! - [`class_a`]: equal-neighbor matrices of connected symmetric graphs.
//! - [`class_q`]: the admissibility test for a candidate `M` against a set of
//!   update matrices (nonzero PSD, non-increasing, vanishing on consensus).
//! - [`symmetrize`]: averaging a candidate over all node relabelings and the
//!   resulting one-parameter family of invariant forms.
//! - [`counterexample`]: an explicit graph and state on which the sample
//!   variance increases, for every `n ≥ 8`.
//! - [`weighted`]: `M = HᵀDH` built from a positive left fixed vector.

pub mod class_a;
pub mod class_q;
pub mod counterexample;
pub mod symmetrize;
pub mod weighted;

use serde::Serialize;

use crate::error::Result;
use crate::field::Field;
use crate::matrix::{Mat, Vector};
use crate::rat::Rat;

pub use class_a::{enumerate_class_a, is_class_a_member};
pub use class_q::{check_class_q, check_class_q_approx, ApproxClassQReport, ClassQReport, ConditionA, ConditionC, DecreaseCheck};
pub use counterexample::{counterexample, Counterexample};
pub use symmetrize::{invariant_form_decompose, symmetrize, symmetrize_closed_form, Proportionality};
pub use weighted::{
    common_pi, conserved_functional_check, left_eigenvector, pi_weighted_lyapunov, weighted_contraction_check,
    PiWeighted,
};

/// `C = I − eeᵀ/n`, so that `xᵀ C x` is the sample variance of `x`.
pub fn variance_matrix<T: Field>(n: usize) -> Mat<T> {
    let inv = T::one() / T::from_int(n.max(1) as i64);
    Mat::from_fn(n, n, |i, j| if i == j { T::one() - inv.clone() } else { -inv.clone() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Variance,
    Symmetrized { origin: Box<Provenance> },
    PiWeighted { pi: Vector<Rat> },
    SearchOutput,
    UserSupplied,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovCandidate {
    m: Mat<Rat>,
    provenance: Provenance,
}

impl LyapunovCandidate {
    pub fn new(m: Mat<Rat>, provenance: Provenance) -> Result<Self> {
        m.require_symmetric()?;
        Ok(LyapunovCandidate { m, provenance })
    }

    pub fn variance(n: usize) -> Self {
        LyapunovCandidate { m: variance_matrix(n), provenance: Provenance::Variance }
    }

    pub fn matrix(&self) -> &Mat<Rat> {
        &self.m
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    /// `Q(x) = xᵀ M x`.
    pub fn value(&self, x: &Vector<Rat>) -> Result<Rat> {
        self.m.quad_form(x)
    }
}
