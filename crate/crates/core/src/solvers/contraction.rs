use crate::error::{check_dim, invalid, Result};
use crate::linalg::Vector;

/// Affine contraction `f(x) = k·x + (1 − k)·anchor`, `k ∈ [0, 1)`.
///
/// Its Lipschitz constant is exactly `k` in every norm, the `M`-norm included.
/// A missing anchor means the origin, giving `f(x) = k·x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contraction {
    coefficient: f64,
    anchor: Option<Vector>,
}

impl Contraction {
    /// `f(x) = k·x`.
    pub fn scaling(coefficient: f64) -> Result<Self> {
        check_coefficient(coefficient)?;
        Ok(Self {
            coefficient,
            anchor: None,
        })
    }

    pub fn toward(coefficient: f64, anchor: Vector) -> Result<Self> {
        check_coefficient(coefficient)?;
        Ok(Self {
            coefficient,
            anchor: Some(anchor),
        })
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn anchor(&self) -> Option<&Vector> {
        self.anchor.as_ref()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        let k = self.coefficient;
        match &self.anchor {
            None => Ok(x.scale(k)),
            Some(a) => {
                check_dim(a.dim(), x.dim())?;
                x.lincomb(k, a, 1.0 - k)
            }
        }
    }
}

fn check_coefficient(k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k) {
        return invalid(format!(
            "contraction coefficient must lie in [0, 1), got {k}"
        ));
    }
    Ok(())
}
