//! Permutations of `{0, …, n−1}` and their matrices.
//!
//! The matrix `P_σ` of a permutation `σ` acts by `(P_σ x)_i = x_{σ(i)}`, so
//! row `i` of `P_σ` has its single one in column `σ(i)`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{Mat, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n {
                return Err(Error::InvalidPermutation(format!("image {v} out of range for n = {n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Transposition of `i` and `j`.
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(i, j);
        Permutation { image }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.shuffle(rng);
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `σ(i)`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &s) in self.image.iter().enumerate() {
            inv[s] = i;
        }
        Permutation { image: inv }
    }

    /// Composition matching matrix multiplication:
    /// `P(self) · P(other) = P(self.compose(other))`, i.e. `i ↦ other(self(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation { image: self.image.iter().map(|&i| other.image[i]).collect() }
    }

    pub fn matrix<T: Field>(&self) -> Mat<T> {
        Mat::from_fn(self.len(), self.len(), |i, j| if self.image[i] == j { T::one() } else { T::zero() })
    }

    /// `P_σ x` without forming the matrix.
    pub fn permute<T: Field>(&self, x: &Vector<T>) -> Vector<T> {
        Vector::new(self.image.iter().map(|&s| x[s].clone()).collect())
    }

    /// `P_σᵀ M P_σ`, computed entrywise as `M[σ⁻¹(i)][σ⁻¹(j)]`.
    pub fn congruence<T: Field>(&self, m: &Mat<T>) -> Mat<T> {
        self.inverse().conjugate(m)
    }

    /// `P_σ A P_σᵀ`, computed entrywise as `A[σ(i)][σ(j)]`: the matrix of the
    /// same graph with its nodes renamed.
    pub fn conjugate<T: Field>(&self, a: &Mat<T>) -> Mat<T> {
        Mat::from_fn(self.len(), self.len(), |i, j| a[(self.image[i], self.image[j])].clone())
    }
}

/// All `n!` permutations in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut a = current.clone();
        // standard next-permutation step
        if let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) {
            let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("pivot exists");
            a.swap(i - 1, j);
            a[i..].reverse();
            next = Some(a);
        }
        Some(Permutation { image: current })
    })
}
