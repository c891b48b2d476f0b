//! One iteration of each splitting method.
//!
//! Every method is written in terms of the forward–backward map
//! `J = (I + λM⁻¹∂g)⁻¹(I − λM⁻¹∇h)`.

use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{Preconditioner, Vector};
use crate::solvers::config::SUMMABLE_FLOOR;
use crate::solvers::prox::{check_resolvent_args, resolvent_in_place};
use crate::solvers::{Algorithm, InertiaMode, LassoProblem, ProxTerm, SmoothTerm, SolverConfig};

/// The two most recent iterates `(xₙ₋₁, xₙ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterState {
    pub x_prev: Vector,
    pub x_curr: Vector,
}

impl IterState {
    pub fn new(x_prev: Vector, x_curr: Vector) -> Result<Self> {
        check_dim(x_prev.dim(), x_curr.dim())?;
        Ok(Self { x_prev, x_curr })
    }

    /// `x₀ = x₁ = x`.
    pub fn at(x: Vector) -> Self {
        Self {
            x_prev: x.clone(),
            x_curr: x,
        }
    }
}

/// `J(x) = (I + λM⁻¹∂(ρ‖·‖₁))⁻¹(x − λM⁻¹∇h(x))`.
pub fn fb_map(
    x: &Vector,
    lambda: f64,
    m: &Preconditioner,
    h: &SmoothTerm,
    g: &ProxTerm,
) -> Result<Vector> {
    check_resolvent_args(lambda, g.weight())?;
    check_dim(h.dim(), x.dim())?;
    check_dim(m.dim(), x.dim())?;
    Ok(Vector::from_raw(fb_core(
        x.as_slice(),
        x.as_slice(),
        lambda,
        m,
        h,
        g,
    )))
}

/// Resolvent of `input − λM⁻¹∇h(grad_at)`. `J` is the case `input == grad_at`.
fn fb_core(
    input: &[f64],
    grad_at: &[f64],
    lambda: f64,
    m: &Preconditioner,
    h: &SmoothTerm,
    g: &ProxTerm,
) -> Vec<f64> {
    let mut out = vec![0.0; input.len()];
    h.grad_into(grad_at, &mut out);
    for ((o, xi), mi) in out.iter_mut().zip(input).zip(m.diag()) {
        *o = xi - lambda * (*o / mi);
    }
    resolvent_in_place(&mut out, lambda, g.weight(), m);
    out
}

/// `θₙ` after applying the configured inertia mode.
pub fn inertia_weight(state: &IterState, n: usize, cfg: &SolverConfig) -> f64 {
    let theta = cfg.theta.value(n);
    match cfg.inertia {
        InertiaMode::Scheduled => theta,
        InertiaMode::Summable { c } => {
            let step = cfg
                .preconditioner
                .dist_slices(state.x_curr.as_slice(), state.x_prev.as_slice());
            let nf = n.max(1) as f64;
            theta.min(c / (nf * nf * step.max(SUMMABLE_FLOOR)))
        }
    }
}

/// `yₙ = xₙ + θₙ(xₙ − xₙ₋₁)`; returns `xₙ` itself when `θₙ = 0`.
fn extrapolate(state: &IterState, theta: f64) -> Vec<f64> {
    let curr = state.x_curr.as_slice();
    if theta == 0.0 {
        return curr.to_vec();
    }
    curr.iter()
        .zip(state.x_prev.as_slice())
        .map(|(c, p)| c + theta * (c - p))
        .collect()
}

/// `(1 − α)·y + α·jy`.
fn relax(y: &[f64], jy: &[f64], alpha: f64) -> Vec<f64> {
    y.iter()
        .zip(jy)
        .map(|(a, b)| (1.0 - alpha) * a + alpha * b)
        .collect()
}

fn check_state(state: &IterState, cfg: &SolverConfig, problem: &LassoProblem) -> Result<()> {
    check_dim(problem.dim(), state.x_curr.dim())?;
    check_dim(problem.dim(), state.x_prev.dim())?;
    check_dim(problem.dim(), cfg.preconditioner.dim())
}

fn finish(v: Vec<f64>) -> Result<Vector> {
    Vector::from_raw(v).ensure_finite()
}

fn wrong_algorithm<T>(cfg: &SolverConfig, step: &str) -> Result<T> {
    invalid(format!("{step} cannot run algorithm `{}`", cfg.algorithm))
}

/// Forward–backward / proximal gradient, and the Moudafi–Oliny inertial
/// variant that extrapolates but keeps the gradient at `xₙ`.
pub fn step_classical(
    state: &IterState,
    n: usize,
    cfg: &SolverConfig,
    problem: &LassoProblem,
) -> Result<Vector> {
    check_state(state, cfg, problem)?;
    let lambda = cfg.lambda.value(n);
    check_resolvent_args(lambda, problem.prox.weight())?;
    let (m, h, g) = (&cfg.preconditioner, &problem.smooth, &problem.prox);
    let x = state.x_curr.as_slice();
    match cfg.algorithm {
        Algorithm::Fbs | Algorithm::ProxGrad => finish(fb_core(x, x, lambda, m, h, g)),
        Algorithm::MoudafiOliny => {
            let y = extrapolate(state, inertia_weight(state, n, cfg));
            finish(fb_core(&y, x, lambda, m, h, g))
        }
        _ => wrong_algorithm(cfg, "step_classical"),
    }
}

/// `xₙ₊₁ = J(yₙ)` with inertial extrapolation `yₙ`.
pub fn step_lorenz_pock(
    state: &IterState,
    n: usize,
    cfg: &SolverConfig,
    problem: &LassoProblem,
) -> Result<Vector> {
    if cfg.algorithm != Algorithm::LorenzPock {
        return wrong_algorithm(cfg, "step_lorenz_pock");
    }
    check_state(state, cfg, problem)?;
    let lambda = cfg.lambda.value(n);
    check_resolvent_args(lambda, problem.prox.weight())?;
    let y = extrapolate(state, inertia_weight(state, n, cfg));
    finish(fb_core(
        &y,
        &y,
        lambda,
        &cfg.preconditioner,
        &problem.smooth,
        &problem.prox,
    ))
}

/// The shared inner stage `J((1 − αₙ)yₙ + αₙJ(yₙ))`.
fn normal_s_stage(
    state: &IterState,
    n: usize,
    cfg: &SolverConfig,
    problem: &LassoProblem,
) -> Result<Vec<f64>> {
    check_state(state, cfg, problem)?;
    let lambda = cfg.lambda.value(n);
    check_resolvent_args(lambda, problem.prox.weight())?;
    let (m, h, g) = (&cfg.preconditioner, &problem.smooth, &problem.prox);
    let y = extrapolate(state, inertia_weight(state, n, cfg));
    let jy = fb_core(&y, &y, lambda, m, h, g);
    let u = relax(&y, &jy, cfg.alpha.value(n));
    Ok(fb_core(&u, &u, lambda, m, h, g))
}

/// `xₙ₊₁ = J((1 − αₙ)yₙ + αₙJ(yₙ))`.
pub fn step_apfbnsm(
    state: &IterState,
    n: usize,
    cfg: &SolverConfig,
    problem: &LassoProblem,
) -> Result<Vector> {
    if cfg.algorithm != Algorithm::Apfbnsm {
        return wrong_algorithm(cfg, "step_apfbnsm");
    }
    finish(normal_s_stage(state, n, cfg, problem)?)
}

/// `zₙ` from the normal-S stage, then `xₙ₊₁ = βₙf(zₙ) + (1 − βₙ)J(zₙ)`.
pub fn step_new(
    state: &IterState,
    n: usize,
    cfg: &SolverConfig,
    problem: &LassoProblem,
) -> Result<Vector> {
    if cfg.algorithm != Algorithm::New {
        return wrong_algorithm(cfg, "step_new");
    }
    let lambda = cfg.lambda.value(n);
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Config(format!(
            "new algorithm requires lambda in (0, 1], got {lambda}"
        )));
    }
    let z = normal_s_stage(state, n, cfg, problem)?;
    let jz = fb_core(
        &z,
        &z,
        lambda,
        &cfg.preconditioner,
        &problem.smooth,
        &problem.prox,
    );
    let fz = cfg.contraction.apply(&Vector::from_raw(z))?;
    let beta = cfg.beta.value(n);
    finish(
        fz.iter()
            .zip(&jz)
            .map(|(f, j)| beta * f + (1.0 - beta) * j)
            .collect(),
    )
}

/// Dispatches to the step function of `cfg.algorithm`.
pub fn step(
    state: &IterState,
    n: usize,
    cfg: &SolverConfig,
    problem: &LassoProblem,
) -> Result<Vector> {
    match cfg.algorithm {
        Algorithm::Fbs | Algorithm::ProxGrad | Algorithm::MoudafiOliny => {
            step_classical(state, n, cfg, problem)
        }
        Algorithm::LorenzPock => step_lorenz_pock(state, n, cfg, problem),
        Algorithm::Apfbnsm => step_apfbnsm(state, n, cfg, problem),
        Algorithm::New => step_new(state, n, cfg, problem),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::linalg::{IdentityMap, ZeroMap};
    use crate::solvers::{Contraction, Schedule};

    fn v1(x: f64) -> Vector {
        Vector::new(vec![x]).unwrap()
    }

    /// `½(x − b)² + ρ|x|` in one dimension.
    fn lasso_1d(b: f64, rho: f64) -> LassoProblem {
        let h = SmoothTerm::new(Arc::new(IdentityMap::new(1)), v1(b), 1.0).unwrap();
        LassoProblem::new(h, ProxTerm::new(rho).unwrap())
    }

    /// Gradient identically zero, `ρ = 1`.
    fn pure_prox() -> LassoProblem {
        let h = SmoothTerm::new(Arc::new(ZeroMap::new(1, 1)), v1(0.0), 1.0).unwrap();
        LassoProblem::new(h, ProxTerm::new(1.0).unwrap())
    }

    fn cfg(alg: Algorithm, theta: f64) -> SolverConfig {
        let mut c = SolverConfig::new(alg, Preconditioner::identity(1));
        c.lambda = Schedule::Constant(1.0);
        c.theta = Schedule::Constant(theta);
        c
    }

    fn state(prev: f64, curr: f64) -> IterState {
        IterState::new(v1(prev), v1(curr)).unwrap()
    }

    #[test]
    fn fb_map_examples() {
        let id = Preconditioner::identity(2);
        let x = Vector::new(vec![0.4, -1.7]).unwrap();
        let h = SmoothTerm::new(Arc::new(IdentityMap::new(2)), x.clone(), 1.0).unwrap();
        assert_eq!(
            fb_map(&x, 0.7, &id, &h, &ProxTerm::new(0.0).unwrap()).unwrap(),
            x
        );

        let p = lasso_1d(2.0, 1.0);
        let m = Preconditioner::identity(1);
        // soft(0 − (0 − 2), 1) = 1.
        assert_eq!(
            fb_map(&v1(0.0), 1.0, &m, &p.smooth, &p.prox).unwrap()[0],
            1.0
        );
        // The lasso minimizer soft(2, 1) = 1 is fixed.
        assert_eq!(
            fb_map(&v1(1.0), 1.0, &m, &p.smooth, &p.prox).unwrap()[0],
            1.0
        );
    }

    #[test]
    fn classical_examples() {
        let p = lasso_1d(2.0, 1.0);
        let fbs = step_classical(&state(0.0, 0.0), 1, &cfg(Algorithm::Fbs, 0.0), &p).unwrap();
        assert_eq!(fbs[0], 1.0);

        let s = state(0.3, -0.8);
        let a = step_classical(&s, 3, &cfg(Algorithm::Fbs, 0.0), &p).unwrap();
        let b = step_classical(&s, 3, &cfg(Algorithm::MoudafiOliny, 0.0), &p).unwrap();
        assert_eq!(a, b);

        // y = 1.5, gradient at x_curr = −1, resolvent input 2.5, soft(2.5, 1) = 1.5.
        let mo = step_classical(&state(0.0, 1.0), 1, &cfg(Algorithm::MoudafiOliny, 0.5), &p);
        assert_eq!(mo.unwrap()[0], 1.5);

        assert!(step_classical(&s, 1, &cfg(Algorithm::New, 0.0), &p).is_err());
    }

    #[test]
    fn lorenz_pock_examples() {
        let p = lasso_1d(2.0, 1.0);
        // y = 1.5, J(1.5) = soft(1.5 + 0.5, 1) = 1.
        let lp = step_lorenz_pock(&state(0.0, 1.0), 1, &cfg(Algorithm::LorenzPock, 0.5), &p);
        assert_eq!(lp.unwrap()[0], 1.0);

        // y = 5, soft(5, 1) = 4.
        let lp = step_lorenz_pock(
            &state(2.0, 4.0),
            1,
            &cfg(Algorithm::LorenzPock, 0.5),
            &pure_prox(),
        );
        assert_eq!(lp.unwrap()[0], 4.0);

        let s = state(0.9, -0.2);
        let a = step_lorenz_pock(&s, 2, &cfg(Algorithm::LorenzPock, 0.0), &p).unwrap();
        let b = step_classical(&s, 2, &cfg(Algorithm::Fbs, 0.0), &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn apfbnsm_examples() {
        let mut c = cfg(Algorithm::Apfbnsm, 0.0);
        c.alpha = Schedule::Constant(0.5);
        // y = 4, J(y) = 3, u = 3.5, J(u) = 2.5.
        let out = step_apfbnsm(&state(4.0, 4.0), 1, &c, &pure_prox()).unwrap();
        assert_eq!(out[0], 2.5);

        // α → 0 collapses to J(yₙ).
        let p = lasso_1d(2.0, 0.3);
        c.alpha = Schedule::Constant(0.0);
        c.theta = Schedule::Constant(0.2);
        let s = state(-1.0, 0.5);
        let out = step_apfbnsm(&s, 1, &c, &p).unwrap();
        let y = v1(0.5 + 0.2 * 1.5);
        let jy = fb_map(&y, 1.0, &c.preconditioner, &p.smooth, &p.prox).unwrap();
        assert_eq!(out, jy);
    }

    #[test]
    fn new_examples() {
        let mut c = cfg(Algorithm::New, 0.0);
        c.alpha = Schedule::Constant(0.5);
        c.beta = Schedule::Constant(0.5);
        c.contraction = Contraction::scaling(0.9).unwrap();
        // z = 2.5, f(z) = 2.25, J(z) = 1.5, output 0.5·2.25 + 0.5·1.5.
        let out = step_new(&state(4.0, 4.0), 1, &c, &pure_prox()).unwrap();
        assert_eq!(out[0], 1.875);

        // Every stage fixes the lasso solution when f is the constant map onto it.
        let p = lasso_1d(2.0, 1.0);
        c.contraction = Contraction::toward(0.0, v1(1.0)).unwrap();
        c.theta = Schedule::Constant(0.1);
        let out = step_new(&state(1.0, 1.0), 1, &c, &p).unwrap();
        assert_eq!(out[0], 1.0);

        c.lambda = Schedule::Constant(1.5);
        assert!(matches!(
            step_new(&state(1.0, 1.0), 1, &c, &p),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn summable_inertia_caps_theta() {
        let mut c = cfg(Algorithm::LorenzPock, 0.5);
        c.inertia = InertiaMode::Summable { c: 1.0 };
        // ‖x₁ − x₀‖ = 10 at n = 2: min(0.5, 1/(4·10)) = 0.025.
        assert_eq!(inertia_weight(&state(0.0, 10.0), 2, &c), 0.025);
        // Zero step: the cap is huge, so the schedule wins.
        assert_eq!(inertia_weight(&state(3.0, 3.0), 2, &c), 0.5);
    }

    #[test]
    fn non_finite_iterate_is_reported() {
        let h = SmoothTerm::new(Arc::new(IdentityMap::new(1)), v1(1e308), 1.0).unwrap();
        let p = LassoProblem::new(h, ProxTerm::new(0.0).unwrap());
        let mut c = cfg(Algorithm::LorenzPock, 0.9);
        c.lambda = Schedule::Constant(1.9);
        let s = state(-1e308, 1e308);
        assert!(step(&s, 1, &c, &p).is_err());
    }
}
