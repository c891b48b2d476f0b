use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, invalid, Result};
use crate::linalg::{operator_norm, LinearMap, Vector};

/// `h(x) = ½‖Ax − b‖²` with an upper bound `L_h` on the Lipschitz constant
/// of its gradient.
#[derive(Clone)]
pub struct SmoothTerm {
    map: Arc<dyn LinearMap>,
    observation: Vector,
    lipschitz: f64,
}

impl fmt::Debug for SmoothTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothTerm")
            .field("dim_in", &self.map.dim_in())
            .field("dim_out", &self.map.dim_out())
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl SmoothTerm {
    pub fn new(map: Arc<dyn LinearMap>, observation: Vector, lipschitz: f64) -> Result<Self> {
        check_dim(map.dim_out(), observation.dim())?;
        if !(lipschitz > 0.0) || !lipschitz.is_finite() {
            return invalid(format!(
                "Lipschitz constant must be finite and > 0, got {lipschitz}"
            ));
        }
        Ok(Self {
            map,
            observation,
            lipschitz,
        })
    }

    /// Uses `‖A‖²` from power iteration as `L_h`.
    pub fn with_estimated_lipschitz(map: Arc<dyn LinearMap>, observation: Vector) -> Result<Self> {
        let norm = operator_norm(map.as_ref())?;
        if norm == 0.0 {
            return invalid("observation map is zero; supply a Lipschitz constant explicitly");
        }
        Self::new(map, observation, norm * norm)
    }

    /// Fails when `L_h < ‖A‖² − tol`.
    pub fn check_lipschitz(&self, tol: f64) -> Result<()> {
        let norm = operator_norm(self.map.as_ref())?;
        let needed = norm * norm;
        if self.lipschitz < needed - tol {
            return invalid(format!(
                "Lipschitz constant {} is below ‖A‖² = {needed}",
                self.lipschitz
            ));
        }
        Ok(())
    }

    pub fn map(&self) -> &dyn LinearMap {
        self.map.as_ref()
    }

    pub fn observation(&self) -> &Vector {
        &self.observation
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn dim(&self) -> usize {
        self.map.dim_in()
    }

    /// `Ax − b` into a fresh buffer.
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.map.dim_out()];
        self.map.apply_into(x, &mut r);
        for (ri, bi) in r.iter_mut().zip(self.observation.as_slice()) {
            *ri -= bi;
        }
        r
    }

    pub(crate) fn grad_into(&self, x: &[f64], out: &mut [f64]) {
        let r = self.residual(x);
        self.map.apply_adjoint_into(&r, out);
    }

    pub fn value(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        let r = self.residual(x.as_slice());
        Ok(0.5 * r.iter().map(|v| v * v).sum::<f64>())
    }
}

/// `g(x) = ρ‖x‖₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxTerm {
    weight: f64,
}

impl ProxTerm {
    pub fn new(weight: f64) -> Result<Self> {
        if !(weight >= 0.0) || !weight.is_finite() {
            return invalid(format!("l1 weight must be finite and >= 0, got {weight}"));
        }
        Ok(Self { weight })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn value(&self, x: &Vector) -> f64 {
        self.weight * x.iter().map(|c| c.abs()).sum::<f64>()
    }
}

/// `min ½‖Ax − b‖² + ρ‖x‖₁`.
#[derive(Debug, Clone)]
pub struct LassoProblem {
    pub smooth: SmoothTerm,
    pub prox: ProxTerm,
}

impl LassoProblem {
    pub fn new(smooth: SmoothTerm, prox: ProxTerm) -> Self {
        Self { smooth, prox }
    }

    pub fn dim(&self) -> usize {
        self.smooth.dim()
    }

    pub fn objective(&self, x: &Vector) -> Result<f64> {
        Ok(self.smooth.value(x)? + self.prox.value(x))
    }
}

/// `∇h(x) = Aᵀ(Ax − b)`.
pub fn grad_least_squares(h: &SmoothTerm, x: &Vector) -> Result<Vector> {
    check_dim(h.dim(), x.dim())?;
    let mut out = vec![0.0; h.dim()];
    h.grad_into(x.as_slice(), &mut out);
    Ok(Vector::from_raw(out))
}
