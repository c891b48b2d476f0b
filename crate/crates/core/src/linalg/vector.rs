use std::ops::Index;

use crate::error::{check_dim, invalid, Error, Result};

/// A dense point of ℝ^d with finite coordinates.
///
/// All arithmetic accumulates in plain sequential index order so results are
/// reproducible bit for bit on a given toolchain.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    /// Wraps `coords`, rejecting empty input and non-finite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return invalid("vector dimension must be at least 1");
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::Numerical(format!(
                "coordinate {i} is not finite ({})",
                coords[i]
            )));
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be at least 1");
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// Builds a vector without checking finiteness. Callers re-validate with
    /// [`Vector::ensure_finite`] where divergence matters.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.coords.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub(crate) fn ensure_finite(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Numerical("non-finite coordinate produced".into()))
        }
    }

    /// Euclidean inner product.
    pub fn dot(&self, other: &Vector) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(dot(&self.coords, &other.coords))
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        dot(&self.coords, &self.coords).sqrt()
    }

    /// Max-norm.
    pub fn norm_inf(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, a: f64) -> Vector {
        Vector::from_raw(self.coords.iter().map(|c| a * c).collect())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector::from_raw(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector::from_raw(sub(&self.coords, &other.coords)))
    }

    /// `a·self + b·other`.
    pub fn lincomb(&self, a: f64, other: &Vector, b: f64) -> Result<Vector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Vector::from_raw(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        ))
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}

impl<'a> IntoIterator for &'a Vector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.coords.iter()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
