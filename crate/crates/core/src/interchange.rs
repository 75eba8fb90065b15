//! JSON encoding shared by every file format.
//!
//! Exact values are strings (`"11/5"`), approximate values are JSON numbers,
//! matrices are arrays of row arrays. A matrix or vector is homogeneous:
//! mixing strings and numbers is a [`Error::ModeMismatch`].

use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, Mode, Scalar};
use crate::matrix::{Mat, Vector};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq)]
pub enum AnyMat {
    Exact(Mat<Rat>),
    Approx(Mat<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyVec {
    Exact(Vector<Rat>),
    Approx(Vector<f64>),
}

impl AnyMat {
    pub fn mode(&self) -> Mode {
        match self {
            AnyMat::Exact(_) => Mode::Exact,
            AnyMat::Approx(_) => Mode::Approx,
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        match self {
            AnyMat::Exact(m) => m.to_f64(),
            AnyMat::Approx(m) => m.clone(),
        }
    }

    pub fn exact(&self) -> Result<&Mat<Rat>> {
        match self {
            AnyMat::Exact(m) => Ok(m),
            AnyMat::Approx(_) => Err(Error::ModeMismatch),
        }
    }

    pub fn mul(&self, other: &AnyMat) -> Result<AnyMat> {
        match (self, other) {
            (AnyMat::Exact(a), AnyMat::Exact(b)) => a.mul(b).map(AnyMat::Exact),
            (AnyMat::Approx(a), AnyMat::Approx(b)) => a.mul(b).map(AnyMat::Approx),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMat::Exact(m) => mat_to_json(m),
            AnyMat::Approx(m) => mat_to_json(m),
        }
    }
}

impl AnyVec {
    pub fn len(&self) -> usize {
        match self {
            AnyVec::Exact(v) => v.len(),
            AnyVec::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Encodes exact values as strings and approximate values as numbers.
pub trait JsonScalar: Field {
    fn to_json(&self) -> Value;
}

impl JsonScalar for Rat {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(Scalar::Exact(s.parse()?)),
        Value::Number(n) => n
            .as_f64()
            .map(Scalar::Approx)
            .ok_or_else(|| Error::Parse(format!("number out of range: {n}"))),
        other => Err(Error::Parse(format!("expected a rational string or number, found {other}"))),
    }
}

pub fn mat_to_json<T: JsonScalar>(m: &Mat<T>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(JsonScalar::to_json).collect())).collect())
}

pub fn vec_to_json<T: JsonScalar>(v: &Vector<T>) -> Value {
    Value::Array(v.iter().map(JsonScalar::to_json).collect())
}

fn homogeneous(values: Vec<Scalar>) -> Result<Option<std::result::Result<Vec<Rat>, Vec<f64>>>> {
    let Some(first) = values.first() else {
        return Ok(None);
    };
    match first.mode() {
        Mode::Exact => values
            .into_iter()
            .map(|s| match s {
                Scalar::Exact(r) => Ok(r),
                Scalar::Approx(_) => Err(Error::ModeMismatch),
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| Some(Ok(v))),
        Mode::Approx => values
            .into_iter()
            .map(|s| match s {
                Scalar::Approx(f) => Ok(f),
                Scalar::Exact(_) => Err(Error::ModeMismatch),
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| Some(Err(v))),
    }
}

pub fn vec_from_json(v: &Value) -> Result<AnyVec> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("vector must be a JSON array".into()))?;
    let scalars = arr.iter().map(scalar_from_json).collect::<Result<Vec<_>>>()?;
    match homogeneous(scalars)? {
        None => Err(Error::Parse("empty vector".into())),
        Some(Ok(r)) => Ok(AnyVec::Exact(Vector::new(r))),
        Some(Err(f)) => Ok(AnyVec::Approx(Vector::new(f))),
    }
}

pub fn mat_from_json(v: &Value) -> Result<AnyMat> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let mut cols = None;
    let mut scalars = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} columns", cols.unwrap_or(0)),
                found: format!("{} columns in row {i}", row.len()),
            });
        }
        for x in row {
            scalars.push(scalar_from_json(x)?);
        }
    }
    let (r, c) = (rows.len(), cols.unwrap_or(0));
    match homogeneous(scalars)? {
        None => Err(Error::Parse("empty matrix".into())),
        Some(Ok(d)) => Ok(AnyMat::Exact(Mat::from_fn(r, c, |i, j| d[i * c + j].clone()))),
        Some(Err(d)) => Ok(AnyMat::Approx(Mat::from_fn(r, c, |i, j| d[i * c + j]))),
    }
}

/// A JSON array of matrices, or an object with a `"matrices"` array.
pub fn mats_from_json(v: &Value) -> Result<Vec<AnyMat>> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("matrices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected an array of matrices or {\"matrices\": [...]}".into()))?,
        _ => return Err(Error::Parse("expected an array of matrices".into())),
    };
    list.iter().map(mat_from_json).collect()
}

pub fn exact_mats(list: &[AnyMat]) -> Result<Vec<Mat<Rat>>> {
    list.iter().map(|m| m.exact().cloned()).collect()
}
