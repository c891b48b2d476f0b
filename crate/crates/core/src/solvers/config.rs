use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Preconditioner;
use crate::solvers::{Contraction, Role, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Classical forward–backward splitting.
    Fbs,
    /// Proximal gradient; identical to `Fbs` for `A = ∂g`, `B = ∇h`.
    ProxGrad,
    /// Inertial forward–backward with the gradient taken at the current iterate.
    MoudafiOliny,
    /// Preconditioned inertial forward–backward.
    LorenzPock,
    /// Accelerated preconditioned forward–backward normal S-iteration.
    Apfbnsm,
    /// Strongly convergent anchored variant built on the APFBNSM inner steps.
    New,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Fbs,
        Algorithm::ProxGrad,
        Algorithm::MoudafiOliny,
        Algorithm::LorenzPock,
        Algorithm::Apfbnsm,
        Algorithm::New,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fbs => "fbs",
            Algorithm::ProxGrad => "prox-grad",
            Algorithm::MoudafiOliny => "moudafi-oliny",
            Algorithm::LorenzPock => "lorenz-pock",
            Algorithm::Apfbnsm => "apfbnsm",
            Algorithm::New => "new",
        }
    }

    pub fn uses_inertia(self) -> bool {
        !matches!(self, Algorithm::Fbs | Algorithm::ProxGrad)
    }

    /// Methods whose step size is a single constant `λ ∈ (0, 1]`.
    pub fn needs_constant_lambda(self) -> bool {
        matches!(self, Algorithm::Apfbnsm | Algorithm::New)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown algorithm `{s}` (expected one of fbs, prox-grad, moudafi-oliny, \
                     lorenz-pock, apfbnsm, new)"
                ))
            })
    }
}

/// How `θₙ` is produced at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InertiaMode {
    /// Use the configured schedule as is.
    Scheduled,
    /// `θₙ = min(schedule(n), c / (n²·max(‖xₙ − xₙ₋₁‖_M, 1e-12)))`, which makes
    /// `Σ θₙ‖xₙ − xₙ₋₁‖_M` finite.
    Summable { c: f64 },
}

pub(crate) const SUMMABLE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub lambda: Schedule,
    pub theta: Schedule,
    pub alpha: Schedule,
    pub beta: Schedule,
    pub inertia: InertiaMode,
    pub contraction: Contraction,
    pub preconditioner: Preconditioner,
    pub max_iters: usize,
    /// Relative fixed-point residual target; `0` runs exactly `max_iters`.
    pub stop_tol: f64,
}

impl SolverConfig {
    /// Defaults: `λ = 0.99`, `θₙ = 0.1`, `αₙ = 0.5`, `βₙ = 1/(10n)`,
    /// `f(x) = 0.99x`, 1000 iterations, stop tolerance `1e-10`.
    pub fn new(algorithm: Algorithm, preconditioner: Preconditioner) -> Self {
        Self {
            algorithm,
            lambda: Schedule::Constant(0.99),
            theta: Schedule::Constant(0.1),
            alpha: Schedule::Constant(0.5),
            beta: Schedule::Harmonic(0.1),
            inertia: InertiaMode::Scheduled,
            contraction: Contraction::scaling(0.99).expect("valid default"),
            preconditioner,
            max_iters: 1000,
            stop_tol: 1e-10,
        }
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Note,
    Warning,
}

/// A non-fatal finding from [`validate_config`].
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Convergence condition the finding refers to, e.g. `"(iii)"`.
    pub condition: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Note => "note",
            Severity::Warning => "warning",
        };
        write!(f, "{tag} {}: {}", self.condition, self.message)
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

/// Checks parameter ranges for the selected algorithm.
///
/// Range violations are hard errors. Asymptotic conditions that cannot be
/// verified statically come back as diagnostics.
pub fn validate_config(cfg: &SolverConfig) -> Result<Vec<Diagnostic>> {
    let mut out = Vec::new();
    let alg = cfg.algorithm;

    if !(cfg.stop_tol >= 0.0) || !cfg.stop_tol.is_finite() {
        return config_err(format!(
            "stop_tol must be finite and >= 0, got {}",
            cfg.stop_tol
        ));
    }

    if alg.needs_constant_lambda() {
        let Schedule::Constant(l) = cfg.lambda else {
            return config_err(format!(
                "{alg} takes a constant lambda, got `{}`",
                cfg.lambda
            ));
        };
        if !(l > 0.0 && l <= 1.0) {
            return config_err(format!("{alg} requires lambda in (0, 1], got {l}"));
        }
    } else {
        cfg.lambda.check_role(Role::StepSize)?;
    }

    if alg.uses_inertia() {
        cfg.theta.check_role(Role::Inertia)?;
        match cfg.inertia {
            InertiaMode::Scheduled => {
                if !cfg.theta.eventually_zero() {
                    out.push(Diagnostic {
                        severity: Severity::Warning,
                        condition: "(iii)",
                        message: format!(
                            "theta schedule `{}` does not guarantee summable \
                             θₙ‖xₙ − xₙ₋₁‖_M; use the summable inertia mode to enforce it",
                            cfg.theta
                        ),
                    });
                }
            }
            InertiaMode::Summable { c } => {
                if !(c > 0.0) || !c.is_finite() {
                    return config_err(format!("summable inertia constant must be > 0, got {c}"));
                }
            }
        }
    }

    if alg.needs_constant_lambda() {
        let lo = cfg.alpha.infimum();
        let hi = cfg.alpha.supremum();
        if !(lo > 0.0 && hi < 1.0) || !lo.is_finite() {
            return config_err(format!(
                "alpha schedule `{}` violates condition (i): need 0 < a <= alpha_n <= b < 1",
                cfg.alpha
            ));
        }
        cfg.alpha.check_role(Role::Relaxation)?;
    }

    if alg == Algorithm::New {
        cfg.beta.check_role(Role::Anchor)?;
        let to_zero = cfg.beta.tends_to_zero();
        let diverges = cfg.beta.sum_diverges();
        if !to_zero {
            out.push(Diagnostic {
                severity: Severity::Warning,
                condition: "(iv)",
                message: format!(
                    "beta schedule `{}` has a divergent sum but does not tend to 0",
                    cfg.beta
                ),
            });
        }
        if !diverges {
            out.push(Diagnostic {
                severity: Severity::Warning,
                condition: "(iv)",
                message: format!("beta schedule `{}` has a finite sum", cfg.beta),
            });
        }
        if to_zero {
            out.push(Diagnostic {
                severity: Severity::Note,
                condition: "(ii)",
                message: "a beta schedule tending to 0 cannot stay bounded below by c > 0; \
                          only the limit condition is enforced"
                    .into(),
            });
        }
    }

    Ok(out)
}
