use std::time::Instant;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{m_norm, Vector};
use crate::solvers::{
    fb_map, step, validate_config, Diagnostic, InertiaMode, IterState, LassoProblem, SolverConfig,
};

/// Measurements taken after iteration `iter` produced `x_{iter+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// `h(x) + g(x)`.
    pub objective: f64,
    /// `‖J(x) − x‖_M`.
    pub residual: f64,
    /// `‖xₙ₊₁ − xₙ‖_M`.
    pub step_norm: f64,
    pub snr_db: Option<f64>,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceHeader {
    pub algorithm: String,
    /// One-line `key=value` echo of the configuration.
    pub config: String,
    pub lipschitz: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub header: TraceHeader,
    pub records: Vec<IterationRecord>,
}

#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub x_final: Vector,
    pub trace: IterationTrace,
    /// True when the residual test ended the run before `max_iters`.
    pub converged: bool,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Hooks into [`run_solver`].
pub trait Observer {
    /// Quality metric for the SNR column, if the observer has a reference.
    fn snr(&mut self, _x: &Vector) -> Option<f64> {
        None
    }

    fn on_iteration(&mut self, _record: &IterationRecord, _x: &Vector) -> Control {
        Control::Continue
    }
}

/// Observer that does nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoObserver;

impl Observer for NoObserver {}

/// Echo of the solver parameters, as written into trace headers.
pub fn describe_config(cfg: &SolverConfig) -> String {
    let inertia = match cfg.inertia {
        InertiaMode::Scheduled => "scheduled".to_string(),
        InertiaMode::Summable { c } => format!("summable:{c}"),
    };
    format!(
        "algorithm={} lambda={} theta={} alpha={} beta={} contraction={} inertia={} \
         max_iters={} stop_tol={}",
        cfg.algorithm,
        cfg.lambda,
        cfg.theta,
        cfg.alpha,
        cfg.beta,
        cfg.contraction.coefficient(),
        inertia,
        cfg.max_iters,
        cfg.stop_tol
    )
}

/// Iterates the configured method from `(x0, x1)`.
///
/// Stops once `‖J(xₙ) − xₙ‖_M ≤ stop_tol·(1 + ‖xₙ‖_M)` or after `max_iters`
/// iterations. A non-finite iterate aborts with [`Error::Divergence`].
pub fn run_solver(
    problem: &LassoProblem,
    cfg: &SolverConfig,
    x0: Vector,
    x1: Vector,
    observer: &mut dyn Observer,
) -> Result<SolverOutput> {
    let diagnostics = validate_config(cfg)?;
    check_dim(problem.dim(), x0.dim())?;
    check_dim(problem.dim(), x1.dim())?;
    check_dim(problem.dim(), cfg.preconditioner.dim())?;

    let m = &cfg.preconditioner;
    let header = TraceHeader {
        algorithm: cfg.algorithm.name().to_string(),
        config: describe_config(cfg),
        lipschitz: problem.smooth.lipschitz(),
        seed: None,
    };
    let mut records = Vec::with_capacity(cfg.max_iters);
    let mut state = IterState::new(x0, x1)?;
    let mut converged = false;
    let start = Instant::now();

    for n in 1..=cfg.max_iters {
        let next = step(&state, n, cfg, problem).map_err(|e| match e {
            Error::Numerical(_) => Error::Divergence { iteration: n },
            other => other,
        })?;
        let lambda = cfg.lambda.value(n);
        let jx = fb_map(&next, lambda, m, &problem.smooth, &problem.prox)?;
        let residual = m.dist(&jx, &next)?;
        let step_norm = m.dist(&next, &state.x_curr)?;
        let objective = problem.objective(&next)?;
        if !(residual.is_finite() && objective.is_finite() && step_norm.is_finite()) {
            return Err(Error::Divergence { iteration: n });
        }
        let record = IterationRecord {
            iter: n,
            objective,
            residual,
            step_norm,
            snr_db: observer.snr(&next),
            elapsed_s: start.elapsed().as_secs_f64(),
        };
        let control = observer.on_iteration(&record, &next);
        records.push(record);

        let scale = 1.0 + m_norm(&next, m)?;
        state.x_prev = std::mem::replace(&mut state.x_curr, next);
        if cfg.stop_tol > 0.0 && residual <= cfg.stop_tol * scale {
            converged = true;
            break;
        }
        if control == Control::Stop {
            break;
        }
    }

    Ok(SolverOutput {
        x_final: state.x_curr,
        trace: IterationTrace { header, records },
        converged,
        diagnostics,
    })
}

/// [`run_solver`] with `x₀ = x₁ = x`.
pub fn run_solver_from(
    problem: &LassoProblem,
    cfg: &SolverConfig,
    x: Vector,
    observer: &mut dyn Observer,
) -> Result<SolverOutput> {
    run_solver(problem, cfg, x.clone(), x, observer)
}
