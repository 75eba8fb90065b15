//! Positive semidefiniteness decisions.
//!
//! Exact mode runs symmetric elimination over the rationals and, on failure,
//! returns a vector `x` with `xᵀ M x < 0`. Approximate mode compares the
//! smallest eigenvalue against a tolerance.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::Result;
use crate::field::{Field, TOL_PSD};
use crate::matrix::{Mat, Vector};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq)]
pub enum Psd<T> {
    Psd,
    NotPsd { witness: Vector<T> },
}

impl<T> Psd<T> {
    pub fn is_psd(&self) -> bool {
        matches!(self, Psd::Psd)
    }

    pub fn witness(&self) -> Option<&Vector<T>> {
        match self {
            Psd::Psd => None,
            Psd::NotPsd { witness } => Some(witness),
        }
    }
}

/// Scalars with a PSD decision procedure.
pub trait PsdDecide: Field {
    fn decide_psd(m: &Mat<Self>, tol: f64) -> Result<Psd<Self>>;
}

impl PsdDecide for Rat {
    fn decide_psd(m: &Mat<Rat>, _tol: f64) -> Result<Psd<Rat>> {
        psd_check_exact(m)
    }
}

impl PsdDecide for f64 {
    fn decide_psd(m: &Mat<f64>, tol: f64) -> Result<Psd<f64>> {
        psd_check_approx(m, tol)
    }
}

/// PSD check with the default tolerance (ignored in exact mode).
pub fn psd_check<T: PsdDecide>(m: &Mat<T>) -> Result<Psd<T>> {
    T::decide_psd(m, TOL_PSD)
}

/// Exact decision by pivoted `LDLᵀ` elimination.
///
/// The working matrix is kept as `S = Tᵀ M T` for an accumulated unit
/// transform `T`. Indices are processed left to right: a positive diagonal
/// entry becomes the next pivot; a negative one, or a zero one with a nonzero
/// entry elsewhere in its row, yields a witness `T v` with negative value.
pub fn psd_check_exact(m: &Mat<Rat>) -> Result<Psd<Rat>> {
    let n = m.require_symmetric()?;
    let mut s = m.clone();
    let mut t: Mat<Rat> = Mat::identity(n);
    let mut active: Vec<usize> = (0..n).collect();

    while let Some(&k) = active.first() {
        let pivot = s[(k, k)].clone();
        if pivot.is_negative() {
            return Ok(Psd::NotPsd { witness: column(&t, k) });
        }
        if pivot.is_zero() {
            if let Some(&l) = active.iter().find(|&&l| l != k && !s[(k, l)].is_zero()) {
                // v = c·e_k + e_l gives vᵀSv = 2c·S_kl + S_ll; pick c to make it ≤ −1.
                let c = -(s[(l, l)].abs() + Rat::one()) / (Rat::from_int(2) * s[(k, l)].clone());
                let mut v = Vector::zeros(n);
                v[k] = c;
                v[l] = Rat::one();
                return Ok(Psd::NotPsd { witness: t.mul_vec(&v)? });
            }
            active.remove(0);
            continue;
        }
        active.remove(0);
        // congruence by E = I − e_k rᵀ, r_j = S_kj / S_kk on the active set
        let ratios: Vec<(usize, Rat)> = active
            .iter()
            .filter(|&&j| !s[(k, j)].is_zero())
            .map(|&j| (j, &s[(k, j)] / &pivot))
            .collect();
        for &(j, ref r) in &ratios {
            for &i in &active {
                if s[(k, i)].is_zero() {
                    continue;
                }
                let d = r * &s[(k, i)];
                s[(i, j)] -= d;
            }
            for row in 0..n {
                if t[(row, k)].is_zero() {
                    continue;
                }
                let d = r * &t[(row, k)];
                t[(row, j)] -= d;
            }
        }
        for &(j, _) in &ratios {
            s[(k, j)] = Rat::zero();
            s[(j, k)] = Rat::zero();
        }
    }
    Ok(Psd::Psd)
}

fn column(t: &Mat<Rat>, k: usize) -> Vector<Rat> {
    Vector::new((0..t.rows()).map(|i| t[(i, k)].clone()).collect())
}

/// Smallest-eigenvalue test; the witness is the corresponding eigenvector.
pub fn psd_check_approx(m: &Mat<f64>, tol: f64) -> Result<Psd<f64>> {
    m.require_square()?;
    // exact symmetry is too strict for accumulated float products
    let n = m.rows();
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + m[(i, j)].abs().max(m[(j, i)].abs());
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(crate::error::Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let (lambda, v) = min_eigenpair(m);
    if lambda >= -tol {
        Ok(Psd::Psd)
    } else {
        Ok(Psd::NotPsd { witness: v })
    }
}

pub fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

pub fn from_dmatrix(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Smallest eigenvalue and a unit eigenvector of the symmetric part of `m`.
pub fn min_eigenpair(m: &Mat<f64>) -> (f64, Vector<f64>) {
    let d = to_dmatrix(m);
    let sym = (&d + d.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let (idx, lambda) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    if m.rows() == 0 {
        return (0.0, Vector::zeros(0));
    }
    let v = eig.eigenvectors.column(idx).iter().copied().collect();
    (lambda, Vector::new(v))
}
