//! Vectors, diagonal preconditioners, linear maps and norm estimation.

mod linear_map;
mod precond;
mod spectral;
mod vector;

pub use linear_map::{DenseMatrix, ExplicitPair, IdentityMap, LinearMap, ZeroMap};
pub use precond::{m_inner, m_norm, Preconditioner};
pub use spectral::{
    adjoint_defect, estimate_operator_norm, operator_norm, DEFAULT_NORM_ITERS, DEFAULT_NORM_SEED,
    DEFAULT_NORM_TOL,
};
pub use vector::Vector;
