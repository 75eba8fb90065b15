//! Dense row-major matrices and vectors over a [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{dims, Error, Result};
use crate::field::{Field, TOL_ROW};
use crate::rat::Rat;

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

#[derive(Clone, PartialEq)]
pub struct Vector<T>(Vec<T>);

impl<T: Field> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: format!("{c} columns"),
                    found: format!("{} columns in row {i}", row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &Vector<T>, v: &Vector<T>) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i].clone() * v[j].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(Field::to_f64)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: dims(self.rows, self.cols),
                found: dims(other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: dims(other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out[(i, j)].clone();
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &Vector<T>) -> Result<Vector<T>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", x.len()),
            });
        }
        Ok(Vector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(x.iter())
                        .filter(|(a, _)| !a.is_zero())
                        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
                })
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &Vector<T>) -> Result<T> {
        let mx = self.mul_vec(x)?;
        x.dot(&mx)
    }

    /// `Aᵀ M A`, the congruence of `self` by `a`.
    pub fn congruence(&self, a: &Self) -> Result<Self> {
        a.transpose().mul(&self.mul(a)?)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    /// First `(i, j)` with `m[i][j] != m[j][i]`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn require_symmetric(&self) -> Result<usize> {
        let n = self.require_square()?;
        match self.asymmetry() {
            Some((row, col)) => Err(Error::NotSymmetric { row, col }),
            None => Ok(n),
        }
    }

    /// Nonnegative entries with unit row sums (exactly, or within `tol` in
    /// approximate mode).
    pub fn is_stochastic_with(&self, tol: f64) -> Result<bool> {
        self.require_square()?;
        let zero = T::zero();
        for i in 0..self.rows {
            let row = self.row(i);
            if row.iter().any(|v| *v < zero) {
                return Ok(false);
            }
            let sum = row.iter().fold(T::zero(), |acc, v| acc + v.clone());
            if !sum.close_to(&T::one(), tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_stochastic(&self) -> Result<bool> {
        self.is_stochastic_with(TOL_ROW)
    }

    pub fn is_doubly_stochastic(&self) -> Result<bool> {
        Ok(self.is_stochastic()? && self.transpose().is_stochastic()?)
    }

    pub fn require_stochastic(&self) -> Result<usize> {
        let n = self.require_square()?;
        if self.is_stochastic()? {
            Ok(n)
        } else {
            Err(Error::NotStochastic)
        }
    }
}

impl Mat<Rat> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                self[(r, j)] = &self[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let d = &f * &self[(r, j)];
                    self[(i, j)] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vector<Rat>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rat::zero(); self.cols];
                x[f] = Rat::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m[(r, f)].clone();
                }
                Vector(x)
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<T: Field> Vector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Vector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![T::zero(); n])
    }

    /// The all-ones vector `e`.
    pub fn ones(n: usize) -> Self {
        Vector(vec![T::one(); n])
    }

    /// The `i`th unit vector.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = T::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<T> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> Result<T> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("length {}", self.len()),
                found: format!("length {}", other.len()),
            });
        }
        Ok(self.iter().zip(other.iter()).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    pub fn sum(&self) -> T {
        self.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Vector(self.iter().map(|v| v.clone() * s.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("length {}", self.len()),
                found: format!("length {}", other.len()),
            });
        }
        Ok(Vector(self.iter().zip(other.iter()).map(|(a, b)| a.clone() - b.clone()).collect()))
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Vector<U> {
        Vector(self.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> Vector<f64> {
        self.map(Field::to_f64)
    }

    pub fn max(&self) -> Option<T> {
        self.iter().cloned().reduce(|a, b| if b > a { b } else { a })
    }

    pub fn min(&self) -> Option<T> {
        self.iter().cloned().reduce(|a, b| if b < a { b } else { a })
    }

    /// Row-vector product `xᵀ M`.
    pub fn mul_mat(&self, m: &Mat<T>) -> Result<Self> {
        Ok(Vector(m.transpose().mul_vec(self)?.0))
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl<T: fmt::Debug> fmt::Debug for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Vector").field(&self.0).finish()
    }
}

impl<T> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Vector(v)
    }
}

impl<T: Serialize> Serialize for Mat<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        seq.end()
    }
}

impl<T: Serialize> Serialize for Vector<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Shorthand for building exact matrices in tests and fixtures.
pub fn rat_mat(rows: &[&[(i64, i64)]]) -> Mat<Rat> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&(p, q)| Rat::new(p, q)).collect()).collect())
        .expect("ragged fixture")
}

pub fn rat_vec(entries: &[i64]) -> Vector<Rat> {
    Vector(entries.iter().map(|&v| Rat::from_int(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Mat<Rat> {
        Mat::from_fn(n, n, |_, _| Rat::new(1, n as i64))
    }

    #[test]
    fn identity_product() {
        let a = rat_mat(&[&[(1, 2), (1, 2)], &[(1, 4), (3, 4)]]);
        assert_eq!(Mat::identity(2).mul(&a).unwrap(), a);
        assert_eq!(a.mul(&Mat::identity(2)).unwrap(), a);
    }

    #[test]
    fn complete_graph_averages() {
        let x = rat_vec(&[1, 2, 3]);
        assert_eq!(complete(3).mul_vec(&x).unwrap(), rat_vec(&[2, 2, 2]));
    }

    #[test]
    fn dimension_errors() {
        let a: Mat<Rat> = Mat::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.is_stochastic(), Err(Error::NotSquare { rows: 2, cols: 3 })));
        assert!(a.mul_vec(&rat_vec(&[1, 2])).is_err());
    }

    #[test]
    fn stochastic_checks() {
        assert!(Mat::<Rat>::identity(4).is_stochastic().unwrap());
        let bad = rat_mat(&[&[(1, 2), (1, 3)], &[(1, 2), (1, 2)]]);
        assert!(!bad.is_stochastic().unwrap());
        assert!(complete(5).is_doubly_stochastic().unwrap());
        // star on 3 nodes: centre has degree 3, leaves degree 2
        let star = rat_mat(&[
            &[(1, 3), (1, 3), (1, 3)],
            &[(1, 2), (1, 2), (0, 1)],
            &[(1, 2), (0, 1), (1, 2)],
        ]);
        assert!(star.is_stochastic().unwrap());
        assert!(!star.is_doubly_stochastic().unwrap());
        let negative = rat_mat(&[&[(3, 2), (-1, 2)], &[(0, 1), (1, 1)]]);
        assert!(!negative.is_stochastic().unwrap());
    }

    #[test]
    fn approx_row_tolerance() {
        let a = Mat::from_rows(vec![vec![0.5, 0.5 + 1e-14], vec![1.0, 0.0]]).unwrap();
        assert!(a.is_stochastic().unwrap());
        let b = Mat::from_rows(vec![vec![0.5, 0.5 + 1e-9], vec![1.0, 0.0]]).unwrap();
        assert!(!b.is_stochastic().unwrap());
    }

    #[test]
    fn rank_and_nullspace() {
        let m = rat_mat(&[&[(1, 1), (2, 1), (3, 1)], &[(2, 1), (4, 1), (6, 1)], &[(1, 1), (0, 1), (1, 1)]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(Rat::is_zero));
        assert_eq!(Mat::<Rat>::identity(5).rank(), 5);
        assert_eq!(Mat::<Rat>::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Mat::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
    }
}
