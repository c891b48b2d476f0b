use crate::error::{check_dim, invalid, Result};
use crate::linalg::Vector;

/// Diagonal positive-definite preconditioner `M`.
///
/// Being diagonal it is self-adjoint by construction. It induces the inner
/// product `⟨x, y⟩_M = Σ xᵢ Mᵢᵢ yᵢ` and the corresponding norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Preconditioner {
    diag: Vec<f64>,
}

impl Preconditioner {
    pub fn diagonal(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return invalid("preconditioner dimension must be at least 1");
        }
        if let Some((i, d)) = diag
            .iter()
            .enumerate()
            .find(|(_, d)| !(d.is_finite() && **d > 0.0))
        {
            return invalid(format!(
                "preconditioner entry {i} must be finite and strictly positive, got {d}"
            ));
        }
        Ok(Self { diag })
    }

    /// `c·I` on ℝ^dim.
    pub fn scalar(dim: usize, c: f64) -> Result<Self> {
        if dim == 0 {
            return invalid("preconditioner dimension must be at least 1");
        }
        Self::diagonal(vec![c; dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1.0).expect("identity preconditioner")
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `M x`.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dim(), x.dim())?;
        Ok(Vector::from_raw(
            x.iter().zip(&self.diag).map(|(x, m)| m * x).collect(),
        ))
    }

    /// `M⁻¹ x`.
    pub fn apply_inverse(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dim(), x.dim())?;
        Ok(Vector::from_raw(
            x.iter().zip(&self.diag).map(|(x, m)| x / m).collect(),
        ))
    }

    pub(crate) fn inner_slices(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for ((a, m), b) in x.iter().zip(&self.diag).zip(y) {
            acc += m * (a * b);
        }
        acc
    }

    /// `‖x − y‖_M` without materializing the difference.
    pub(crate) fn dist_slices(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for ((a, m), b) in x.iter().zip(&self.diag).zip(y) {
            let d = a - b;
            acc += d * m * d;
        }
        acc.sqrt()
    }

    pub(crate) fn dist(&self, x: &Vector, y: &Vector) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        check_dim(self.dim(), y.dim())?;
        Ok(self.dist_slices(x.as_slice(), y.as_slice()))
    }
}

/// `⟨x, y⟩_M = Σᵢ xᵢ·Mᵢᵢ·yᵢ`.
pub fn m_inner(x: &Vector, y: &Vector, m: &Preconditioner) -> Result<f64> {
    check_dim(m.dim(), x.dim())?;
    check_dim(m.dim(), y.dim())?;
    Ok(m.inner_slices(x.as_slice(), y.as_slice()))
}

/// `‖x‖_M = sqrt(⟨x, x⟩_M)`.
pub fn m_norm(x: &Vector, m: &Preconditioner) -> Result<f64> {
    Ok(m_inner(x, x, m)?.sqrt())
}
