//! Forward–backward splitting for `0 ∈ ∂g(x) + ∇h(x)` with diagonal
//! preconditioning, inertial extrapolation and Halpern-style anchoring,
//! specialized to `min ½‖Ax − b‖² + ρ‖x‖₁`.
//!
//! Six methods share one forward–backward map
//! `J = (I + λM⁻¹∂g)⁻¹(I − λM⁻¹∇h)`:
//!
//! | name            | update                                                    |
//! |-----------------|-----------------------------------------------------------|
//! | `fbs`/`prox-grad` | `xₙ₊₁ = J(xₙ)`                                          |
//! | `moudafi-oliny` | `xₙ₊₁ = (I + λ∂g)⁻¹(yₙ − λ∇h(xₙ))`                        |
//! | `lorenz-pock`   | `xₙ₊₁ = J(yₙ)`                                            |
//! | `apfbnsm`       | `xₙ₊₁ = J((1 − αₙ)yₙ + αₙJ(yₙ))`                          |
//! | `new`           | `zₙ` as `apfbnsm`, `xₙ₊₁ = βₙf(zₙ) + (1 − βₙ)J(zₙ)`       |
//!
//! with `yₙ = xₙ + θₙ(xₙ − xₙ₋₁)` and `f` a contraction. The anchored `new`
//! method converges strongly.
//!
//! The [`imaging`] module turns deblurring into such a problem: `A` is a
//! periodic convolution, `b` the blurred and noisy image.
//!
//! ```
//! use std::sync::Arc;
//! use fbsplit_core::linalg::{IdentityMap, Preconditioner, Vector};
//! use fbsplit_core::solvers::{
//!     run_solver_from, Algorithm, LassoProblem, NoObserver, ProxTerm, SmoothTerm, SolverConfig,
//! };
//!
//! // min ½(x − 2)² + 0.5|x|, solved by soft-thresholding 2 at 0.5.
//! let h = SmoothTerm::new(Arc::new(IdentityMap::new(1)), Vector::new(vec![2.0])?, 1.0)?;
//! let problem = LassoProblem::new(h, ProxTerm::new(0.5)?);
//! let mut cfg = SolverConfig::new(Algorithm::New, Preconditioner::identity(1));
//! cfg.max_iters = 5000;
//! let out = run_solver_from(&problem, &cfg, Vector::zeros(1), &mut NoObserver)?;
//! assert!((out.x_final[0] - 1.5).abs() < 1e-3);
//! # Ok::<(), fbsplit_core::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod imaging;
pub mod linalg;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::{LinearMap, Preconditioner, Vector};
pub use rng::Rng;
pub use solvers::{Algorithm, LassoProblem, SolverConfig};
