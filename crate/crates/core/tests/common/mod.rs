#![allow(dead_code)]

use std::sync::Arc;

use fbsplit_core::linalg::{operator_norm, DenseMatrix, Preconditioner, Vector};
use fbsplit_core::solvers::{ProxTerm, SmoothTerm};
use fbsplit_core::{LassoProblem, Rng};

pub fn vector(rng: &mut Rng, dim: usize, scale: f64) -> Vector {
    Vector::new(
        rng.gaussian_vec(dim)
            .into_iter()
            .map(|v| v * scale)
            .collect(),
    )
    .unwrap()
}

pub fn dense(rng: &mut Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::new(rows, cols, rng.gaussian_vec(rows * cols)).unwrap()
}

/// Rescales `a` so that `‖a‖² = target`.
pub fn with_squared_norm(mut a: DenseMatrix, target: f64) -> DenseMatrix {
    let n = operator_norm(&a).unwrap();
    a.scale(target.sqrt() / n);
    a
}

pub fn diagonal(rng: &mut Rng, dim: usize, lo: f64, hi: f64) -> Preconditioner {
    Preconditioner::diagonal((0..dim).map(|_| rng.uniform_in(lo, hi)).collect()).unwrap()
}

pub fn smooth(a: DenseMatrix, b: Vector) -> SmoothTerm {
    SmoothTerm::with_estimated_lipschitz(Arc::new(a), b).unwrap()
}

/// Random lasso of size `rows × cols` with `ρ` a fraction of `‖Aᵀb‖_∞`.
pub fn lasso(rng: &mut Rng, rows: usize, cols: usize, rho_fraction: f64) -> LassoProblem {
    let a = dense(rng, rows, cols);
    let b = vector(rng, rows, 1.0);
    let h = smooth(a, b);
    let grad0 = fbsplit_core::solvers::grad_least_squares(&h, &Vector::zeros(cols)).unwrap();
    let rho = rho_fraction * grad0.norm_inf();
    LassoProblem::new(h, ProxTerm::new(rho).unwrap())
}
