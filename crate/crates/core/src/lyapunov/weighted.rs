//! Lyapunov functions from a positive left fixed vector.
//!
//! For stochastic `A` with `πᵀA = πᵀ`, `π > 0`, `πᵀe = 1`, set `D = diag(π)`
//! and `H = I − eπᵀ`. Then `HA = AH`, `He = 0`, and `M = HᵀDH` satisfies
//! `xᵀAᵀMAx ≤ xᵀMx` because `D − AᵀDA ⪰ 0`. The same `M` works for every
//! matrix sharing `π`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Mat, Vector};
use crate::psd::{psd_check_exact, Psd};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiWeighted {
    pub pi: Vector<Rat>,
    pub d: Mat<Rat>,
    pub h: Mat<Rat>,
    pub m: Mat<Rat>,
}

/// `Aᵀ − I`, whose nullspace is the left fixed space of `a`.
fn left_fixed_system(a: &Mat<Rat>) -> Mat<Rat> {
    a.transpose().sub(&Mat::identity(a.rows())).expect("square")
}

fn normalize(v: &Vector<Rat>) -> Option<Vector<Rat>> {
    let s = v.sum();
    if s.is_zero() {
        return None;
    }
    let pi = v.scale(&s.recip());
    pi.iter().all(Rat::is_positive).then_some(pi)
}

/// The unique `π` with `πᵀA = πᵀ`, `πᵀe = 1`, computed exactly. Fails when the
/// fixed space is not one-dimensional or has no positive representative.
pub fn left_eigenvector(a: &Mat<Rat>) -> Result<Vector<Rat>> {
    a.require_stochastic()?;
    let basis = left_fixed_system(a).nullspace();
    match basis.len() {
        1 => normalize(&basis[0]).ok_or(Error::NoPositiveVector),
        0 => Err(Error::NoPositiveVector),
        d => Err(Error::Reducible(d)),
    }
}

fn validate_pi(pi: &Vector<Rat>) -> Result<()> {
    if pi.is_empty() {
        return Err(Error::InvalidPi("empty".into()));
    }
    if let Some(i) = pi.iter().position(|p| !p.is_positive()) {
        return Err(Error::InvalidPi(format!("entry {i} is {} (must be positive)", pi[i])));
    }
    let s = pi.sum();
    if s != Rat::one() {
        return Err(Error::InvalidPi(format!("entries sum to {s}, not 1")));
    }
    Ok(())
}

pub fn pi_weighted_lyapunov(pi: &Vector<Rat>) -> Result<PiWeighted> {
    validate_pi(pi)?;
    let n = pi.len();
    let d = Mat::diag(pi.entries());
    let h = Mat::identity(n).sub(&Mat::outer(&Vector::ones(n), pi))?;
    let m = d.congruence(&h)?;
    Ok(PiWeighted { pi: pi.clone(), d, h, m })
}

fn is_left_fixed(pi: &Vector<Rat>, a: &Mat<Rat>) -> Result<bool> {
    Ok(pi.mul_mat(a)? == *pi)
}

/// Exact test of `D − AᵀDA ⪰ 0` for `D = diag(π)`.
pub fn weighted_contraction_check(a: &Mat<Rat>, pi: &Vector<Rat>) -> Result<Psd<Rat>> {
    a.require_stochastic()?;
    if pi.iter().any(|p| !p.is_positive()) {
        return Err(Error::InvalidPi("entries must be positive".into()));
    }
    if !is_left_fixed(pi, a)? {
        return Err(Error::NotLeftFixed);
    }
    let d = Mat::diag(pi.entries());
    psd_check_exact(&d.sub(&d.congruence(a)?)?)
}

/// A positive normalized `π` fixed by every matrix, if one exists.
///
/// The common fixed space of stochastic matrices is closed under taking
/// absolute values (`|π|ᵀA ≥ |πᵀA|` entrywise with equal totals), so it holds a
/// positive vector exactly when no coordinate vanishes on all of it, and then
/// the sum of the absolute values of any basis is one.
pub fn common_pi(matrices: &[Mat<Rat>]) -> Result<Option<Vector<Rat>>> {
    let first = matrices.first().ok_or_else(|| Error::Invalid("no matrices given".into()))?;
    let n = first.require_stochastic()?;
    let mut rows = Vec::with_capacity(n * matrices.len());
    for a in matrices {
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        a.require_stochastic()?;
        rows.extend(left_fixed_system(a).to_rows());
    }
    let stacked = Mat::from_rows(rows)?;
    let basis = stacked.nullspace();
    if basis.is_empty() {
        return Ok(None);
    }
    let combined = Vector::new(
        (0..n).map(|i| basis.iter().map(|b| b[i].abs()).sum::<Rat>()).collect(),
    );
    let Some(pi) = normalize(&combined) else { return Ok(None) };
    for a in matrices {
        debug_assert!(is_left_fixed(&pi, a)?);
    }
    Ok(Some(pi))
}

/// Indices of the matrices that do not conserve `πᵀx`.
pub fn conserved_functional_check(pi: &Vector<Rat>, matrices: &[Mat<Rat>]) -> Result<Vec<usize>> {
    if pi.iter().any(|p| !p.is_positive()) {
        return Err(Error::InvalidPi("entries must be positive".into()));
    }
    let mut failing = Vec::new();
    for (k, a) in matrices.iter().enumerate() {
        if !is_left_fixed(pi, a)? {
            failing.push(k);
        }
    }
    Ok(failing)
}
