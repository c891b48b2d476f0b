use crate::error::{check_dim, invalid, Result};
use crate::linalg::{Preconditioner, Vector};
use crate::solvers::{fb_map, grad_least_squares, ProxTerm, SmoothTerm};

/// `‖J(x) − x‖_M`; zero exactly at minimizers.
pub fn fixed_point_residual(
    x: &Vector,
    lambda: f64,
    m: &Preconditioner,
    h: &SmoothTerm,
    g: &ProxTerm,
) -> Result<f64> {
    let jx = fb_map(x, lambda, m, h, g)?;
    m.dist(&jx, x)
}

/// Max-norm distance of `−∇h(x)` from `∂(ρ‖·‖₁)(x)`.
pub fn lasso_kkt_residual(x: &Vector, h: &SmoothTerm, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return invalid(format!("rho must be finite and >= 0, got {rho}"));
    }
    check_dim(h.dim(), x.dim())?;
    let grad = grad_least_squares(h, x)?;
    let mut worst: f64 = 0.0;
    for (xi, gi) in x.iter().zip(grad.iter()) {
        let r = if *xi != 0.0 {
            (gi + rho * xi.signum()).abs()
        } else {
            (gi.abs() - rho).max(0.0)
        };
        worst = worst.max(r);
    }
    Ok(worst)
}
