//! Seeded sparse-recovery problems solved by every method in the family.

use std::fmt::Write as _;
use std::sync::Arc;

use fbsplit_core::linalg::{operator_norm, DenseMatrix, LinearMap, Preconditioner, Vector};
use fbsplit_core::solvers::{
    fixed_point_residual, lasso_kkt_residual, run_solver_from, NoObserver, ProxTerm, SmoothTerm,
};
use fbsplit_core::{Algorithm, LassoProblem, Rng};

use crate::error::{CliError, CliResult};
use crate::experiment::{print_diagnostics, SolverSettings};

#[derive(Debug, Clone, PartialEq)]
pub struct LassoDemoConfig {
    pub dimension: usize,
    /// Number of nonzero entries in the ground truth.
    pub sparsity: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub iters: usize,
    pub noise_sigma: f64,
    /// Absolute `ρ`; when `None`, `ρ = rho_fraction·‖Aᵀb‖_∞`.
    pub rho: Option<f64>,
    pub rho_fraction: f64,
    pub kkt_target: f64,
    /// Iteration cap for the prox-grad reference solution.
    pub reference_iters: usize,
    pub solver: SolverSettings,
}

impl Default for LassoDemoConfig {
    fn default() -> Self {
        Self {
            dimension: 50,
            sparsity: 5,
            seed: 42,
            algorithms: Algorithm::ALL.to_vec(),
            iters: 10_000,
            noise_sigma: 1e-3,
            rho: None,
            rho_fraction: 0.1,
            kkt_target: 1e-3,
            reference_iters: 1_000_000,
            solver: SolverSettings::default(),
        }
    }
}

/// A generated instance: `b = A x★ + noise`.
#[derive(Debug, Clone)]
pub struct LassoInstance {
    pub a: DenseMatrix,
    pub truth: Vector,
    pub b: Vector,
    pub rho: f64,
    pub problem: LassoProblem,
    pub preconditioner: Preconditioner,
}

/// `m = ⌈0.8·d⌉` rows with standard normal entries scaled by `1/√m`; the
/// support of `x★` is a seeded random subset with normal values.
pub fn generate_instance(cfg: &LassoDemoConfig) -> CliResult<LassoInstance> {
    let d = cfg.dimension;
    if d < 2 {
        return Err(CliError::usage(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    if cfg.sparsity > d {
        return Err(CliError::usage(format!(
            "sparsity {} exceeds dimension {d}",
            cfg.sparsity
        )));
    }
    if !(cfg.noise_sigma.is_finite() && cfg.noise_sigma >= 0.0) {
        return Err(CliError::usage(format!(
            "noise sigma must be finite and >= 0, got {}",
            cfg.noise_sigma
        )));
    }
    let m = (d * 4).div_ceil(5);
    let mut rng = Rng::new(cfg.seed);
    let scale = 1.0 / (m as f64).sqrt();
    let data: Vec<f64> = (0..m * d).map(|_| rng.next_gaussian() * scale).collect();
    let a = DenseMatrix::new(m, d, data)?;

    let mut order: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    let mut truth = vec![0.0; d];
    for &i in &order[..cfg.sparsity] {
        truth[i] = rng.next_gaussian();
    }
    let truth = Vector::new(truth)?;

    let mut b = a.apply(&truth)?.into_inner();
    if cfg.noise_sigma > 0.0 {
        for v in &mut b {
            *v += cfg.noise_sigma * rng.next_gaussian();
        }
    }
    let b = Vector::new(b)?;

    let rho = match cfg.rho {
        Some(r) => r,
        None => cfg.rho_fraction * a.apply_adjoint(&b)?.norm_inf(),
    };
    let norm = operator_norm(&a)?;
    if norm == 0.0 {
        return Err(CliError::Numerical("generated matrix is zero".into()));
    }
    let lipschitz = norm * norm;
    let smooth = SmoothTerm::new(Arc::new(a.clone()), b.clone(), lipschitz)?;
    let problem = LassoProblem::new(smooth, ProxTerm::new(rho)?);
    Ok(LassoInstance {
        a,
        truth,
        b,
        rho,
        problem,
        preconditioner: Preconditioner::scalar(d, lipschitz)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoRow {
    pub algorithm: Algorithm,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub fixed_point_residual: f64,
    /// Euclidean distance to the reference solution.
    pub distance: f64,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct LassoReport {
    pub rho: f64,
    pub reference: Vector,
    pub reference_kkt: f64,
    pub reference_iterations: usize,
    pub rows: Vec<LassoRow>,
    pub kkt_target: f64,
}

impl LassoReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.kkt_residual <= self.kkt_target)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "rho = {:.6e}; reference: {} prox-grad iterations, kkt {:.3e}",
            self.rho, self.reference_iterations, self.reference_kkt
        )
        .unwrap();
        writeln!(
            out,
            "{:<14} {:>6} {:>12} {:>12} {:>12} {:>14}  status",
            "algorithm", "iters", "kkt", "fixed_point", "distance", "objective"
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:<14} {:>6} {:>12.3e} {:>12.3e} {:>12.3e} {:>14.8e}  {}",
                r.algorithm.name(),
                r.iterations,
                r.kkt_residual,
                r.fixed_point_residual,
                r.distance,
                r.objective,
                if r.kkt_residual <= self.kkt_target {
                    "ok"
                } else {
                    "MISSED"
                }
            )
            .unwrap();
        }
        out
    }
}

/// Long prox-grad run used as the common reference point.
pub fn reference_solution(inst: &LassoInstance, max_iters: usize) -> CliResult<(Vector, usize)> {
    let settings = SolverSettings::default();
    let (mut cfg, _) =
        settings.solver_config(Algorithm::ProxGrad, inst.preconditioner.clone(), max_iters)?;
    cfg.stop_tol = 1e-15;
    let start = Vector::zeros(inst.problem.dim());
    let out = run_solver_from(&inst.problem, &cfg, start, &mut NoObserver)?;
    let iters = out.trace.records.len();
    Ok((out.x_final, iters))
}

/// Runs every configured algorithm from `x = 0` for exactly `iters` steps.
pub fn run_lasso_demo(cfg: &LassoDemoConfig) -> CliResult<LassoReport> {
    if cfg.algorithms.is_empty() {
        return Err(CliError::usage("at least one algorithm is required"));
    }
    let inst = generate_instance(cfg)?;
    let (reference, reference_iterations) = reference_solution(&inst, cfg.reference_iters)?;
    let h = &inst.problem.smooth;
    let reference_kkt = lasso_kkt_residual(&reference, h, inst.rho)?;

    let mut rows = Vec::with_capacity(cfg.algorithms.len());
    for &alg in &cfg.algorithms {
        let (sc, diagnostics) =
            cfg.solver
                .solver_config(alg, inst.preconditioner.clone(), cfg.iters)?;
        print_diagnostics(alg, &diagnostics);
        let start = Vector::zeros(inst.problem.dim());
        let out = run_solver_from(&inst.problem, &sc, start, &mut NoObserver)?;
        let x = &out.x_final;
        rows.push(LassoRow {
            algorithm: alg,
            iterations: out.trace.records.len(),
            kkt_residual: lasso_kkt_residual(x, h, inst.rho)?,
            fixed_point_residual: fixed_point_residual(
                x,
                cfg.solver.lambda,
                &inst.preconditioner,
                h,
                &inst.problem.prox,
            )?,
            distance: x.sub(&reference)?.norm(),
            objective: inst.problem.objective(x)?,
        });
    }
    Ok(LassoReport {
        rho: inst.rho,
        reference,
        reference_kkt,
        reference_iterations,
        rows,
        kkt_target: cfg.kkt_target,
    })
}
