//! Proximal operators, the forward–backward family of step functions, the
//! iteration driver and optimality diagnostics.

mod config;
mod contraction;
mod diagnostics;
mod driver;
mod problem;
mod prox;
mod schedule;
mod steps;

pub use config::{validate_config, Algorithm, Diagnostic, InertiaMode, Severity, SolverConfig};
pub use contraction::Contraction;
pub use diagnostics::{fixed_point_residual, lasso_kkt_residual};
pub use driver::{
    describe_config, run_solver, run_solver_from, Control, IterationRecord, IterationTrace,
    NoObserver, Observer, SolverOutput, TraceHeader,
};
pub use problem::{grad_least_squares, LassoProblem, ProxTerm, SmoothTerm};
pub use prox::{soft_threshold, weighted_resolvent_l1};
pub use schedule::{Role, Schedule};
pub use steps::{
    fb_map, inertia_weight, step, step_apfbnsm, step_classical, step_lorenz_pock, step_new,
    IterState,
};
