//! Scalar modes.
//!
//! Every matrix or vector is homogeneous in its scalar type: `Rat` for exact
//! verification, `f64` for the numeric search. The [`Field`] trait carries the
//! handful of operations the generic code needs; mixing modes inside one
//! operation is a type error. [`Scalar`] is the tagged form used at the
//! interchange boundary, where the mode is only known at runtime.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approx,
}

/// Default row-sum tolerance for approximate stochasticity checks.
pub const TOL_ROW: f64 = 1e-12;
/// Default eigenvalue tolerance for approximate PSD checks.
pub const TOL_PSD: f64 = 1e-9;

pub trait Field:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn from_rat(v: &Rat) -> Self;
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Equality up to `tol` in approximate mode; exact equality otherwise.
    fn close_to(&self, other: &Self, tol: f64) -> bool;
}

impl Field for Rat {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn from_int(v: i64) -> Self {
        Rat::from_int(v)
    }
    fn from_rat(v: &Rat) -> Self {
        v.clone()
    }
    fn to_f64(&self) -> f64 {
        Rat::to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn close_to(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Field for f64 {
    const MODE: Mode = Mode::Approx;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_rat(v: &Rat) -> Self {
        v.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

/// A single value whose mode is decided at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Approx(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Approx(_) => Mode::Approx,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Approx(v) => write!(f, "{v}"),
        }
    }
}
