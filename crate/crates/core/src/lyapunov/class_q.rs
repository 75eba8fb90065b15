//! Admissibility of a quadratic form against a set of update matrices.

use rayon::prelude::*;
use serde::Serialize;

use super::LyapunovCandidate;
use crate::error::{Error, Result};
use crate::matrix::{Mat, Vector};
use crate::psd::{psd_check_approx, psd_check_exact, Psd};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionA {
    Pass,
    ZeroMatrix,
    NotPsd { witness: Vector<Rat> },
}

/// Outcome of `M − AᵀMA ⪰ 0` for one matrix. A witness `x` satisfies
/// `Q(Ax) > Q(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecreaseCheck {
    pub index: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vector<Rat>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_x: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_ax: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionC {
    pub passed: bool,
    pub m_e: Vector<Rat>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassQReport {
    pub member: bool,
    pub condition_a: ConditionA,
    pub condition_b_passed: bool,
    pub condition_b: Vec<DecreaseCheck>,
    pub condition_c: ConditionC,
}

impl ClassQReport {
    pub fn failed_matrices(&self) -> impl Iterator<Item = &DecreaseCheck> {
        self.condition_b.iter().filter(|c| !c.passed)
    }
}

/// Checks, in exact arithmetic, that `M` is nonzero and PSD, that
/// `xᵀAᵀMAx ≤ xᵀMx` for every listed `A`, and that `Me = 0`.
pub fn check_class_q(candidate: &LyapunovCandidate, matrices: &[Mat<Rat>]) -> Result<ClassQReport> {
    let m = candidate.matrix();
    let n = m.rows();
    for a in matrices {
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        a.require_stochastic()?;
    }

    let condition_a = if m.is_zero() {
        ConditionA::ZeroMatrix
    } else {
        match psd_check_exact(m)? {
            Psd::Psd => ConditionA::Pass,
            Psd::NotPsd { witness } => ConditionA::NotPsd { witness },
        }
    };

    let condition_b = matrices
        .par_iter()
        .enumerate()
        .map(|(index, a)| decrease_check(m, a, index))
        .collect::<Result<Vec<_>>>()?;
    let condition_b_passed = condition_b.iter().all(|c| c.passed);

    let m_e = m.mul_vec(&Vector::ones(n))?;
    let condition_c = ConditionC { passed: m_e.iter().all(Rat::is_zero), m_e };

    Ok(ClassQReport {
        member: condition_a == ConditionA::Pass && condition_b_passed && condition_c.passed,
        condition_a,
        condition_b_passed,
        condition_b,
        condition_c,
    })
}

fn decrease_check(m: &Mat<Rat>, a: &Mat<Rat>, index: usize) -> Result<DecreaseCheck> {
    let gap = m.sub(&m.congruence(a)?)?;
    Ok(match psd_check_exact(&gap)? {
        Psd::Psd => DecreaseCheck { index, passed: true, witness: None, q_x: None, q_ax: None },
        Psd::NotPsd { witness } => {
            let q_x = m.quad_form(&witness)?;
            let q_ax = m.quad_form(&a.mul_vec(&witness)?)?;
            debug_assert!(q_ax > q_x);
            DecreaseCheck { index, passed: false, witness: Some(witness), q_x: Some(q_x), q_ax: Some(q_ax) }
        }
    })
}

/// Floating-point version of [`check_class_q`]: eigenvalues down to `−tol`
/// count as nonnegative and `|Me|` up to `tol` counts as zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxClassQReport {
    pub member: bool,
    pub psd: bool,
    pub failed_matrices: Vec<usize>,
    pub max_abs_me: f64,
}

pub fn check_class_q_approx(m: &Mat<f64>, matrices: &[Mat<f64>], tol: f64) -> Result<ApproxClassQReport> {
    let n = m.require_square()?;
    let psd = m.entries().iter().any(|v| *v != 0.0) && psd_check_approx(m, tol)?.is_psd();
    let failed_matrices = matrices
        .par_iter()
        .enumerate()
        .map(|(k, a)| {
            if a.rows() != n || a.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n}x{n}"),
                    found: format!("{}x{}", a.rows(), a.cols()),
                });
            }
            let gap = m.sub(&m.congruence(a)?)?;
            let sym = Mat::from_fn(n, n, |i, j| 0.5 * (gap[(i, j)] + gap[(j, i)]));
            Ok((!psd_check_approx(&sym, tol)?.is_psd()).then_some(k))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let max_abs_me = m.mul_vec(&Vector::ones(n))?.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(ApproxClassQReport {
        member: psd && failed_matrices.is_empty() && max_abs_me <= tol,
        psd,
        failed_matrices,
        max_abs_me,
    })
}
