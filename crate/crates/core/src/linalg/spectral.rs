use crate::error::{invalid, Error, Result};
use crate::linalg::vector::dot;
use crate::linalg::LinearMap;
use crate::rng::Rng;

pub const DEFAULT_NORM_ITERS: usize = 1000;
pub const DEFAULT_NORM_TOL: f64 = 1e-8;
pub const DEFAULT_NORM_SEED: u64 = 12345;

/// Estimates `‖A‖₂` by power iteration on `AᵀA` from a seeded Gaussian start.
///
/// Stops when the Rayleigh quotient changes by at most `tol` relative to its
/// current value, or after `max_iters` products.
pub fn estimate_operator_norm(
    a: &dyn LinearMap,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> Result<f64> {
    if max_iters == 0 {
        return invalid("power iteration needs max_iters >= 1");
    }
    if !(tol > 0.0) {
        return invalid("power iteration tolerance must be positive");
    }
    let n = a.dim_in();
    let mut rng = Rng::new(seed);
    let mut v = rng.gaussian_vec(n);
    if !normalize(&mut v) {
        v = rng.gaussian_vec(n);
        if !normalize(&mut v) {
            return Err(Error::Numerical(
                "power iteration start vector vanished twice".into(),
            ));
        }
    }

    let mut av = vec![0.0; a.dim_out()];
    let mut w = vec![0.0; n];
    let mut rq_prev = f64::NAN;
    let mut rq = 0.0;
    for _ in 0..max_iters {
        a.apply_into(&v, &mut av);
        rq = dot(&av, &av);
        if rq == 0.0 {
            return Ok(0.0);
        }
        if rq_prev.is_finite() && (rq - rq_prev).abs() <= tol * rq {
            break;
        }
        rq_prev = rq;
        a.apply_adjoint_into(&av, &mut w);
        std::mem::swap(&mut v, &mut w);
        if !normalize(&mut v) {
            return Ok(0.0);
        }
    }
    if !rq.is_finite() {
        return Err(Error::Numerical("power iteration overflowed".into()));
    }
    Ok(rq.sqrt())
}

/// `estimate_operator_norm` with the library defaults.
pub fn operator_norm(a: &dyn LinearMap) -> Result<f64> {
    estimate_operator_norm(a, DEFAULT_NORM_ITERS, DEFAULT_NORM_TOL, DEFAULT_NORM_SEED)
}

/// Largest relative mismatch `|⟨Ax, y⟩ − ⟨x, Aᵀy⟩| / (1 + ‖x‖‖y‖)` over
/// `trials` seeded Gaussian pairs.
pub fn adjoint_defect(a: &dyn LinearMap, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return invalid("adjoint check needs at least one trial");
    }
    let mut rng = Rng::new(seed);
    let mut ax = vec![0.0; a.dim_out()];
    let mut aty = vec![0.0; a.dim_in()];
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let x = rng.gaussian_vec(a.dim_in());
        let y = rng.gaussian_vec(a.dim_out());
        a.apply_into(&x, &mut ax);
        a.apply_adjoint_into(&y, &mut aty);
        let lhs = dot(&ax, &y);
        let rhs = dot(&x, &aty);
        let scale = 1.0 + dot(&x, &x).sqrt() * dot(&y, &y).sqrt();
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

fn normalize(v: &mut [f64]) -> bool {
    let n = dot(v, v).sqrt();
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|c| *c /= n);
    true
}
