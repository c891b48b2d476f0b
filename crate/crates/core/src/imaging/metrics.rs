use crate::error::{check_dim, invalid, Result};
use crate::imaging::Image;
use crate::linalg::Vector;
use crate::solvers::Observer;

/// `20·log₁₀(‖x‖₂ / ‖x − xₙ‖₂)` in decibels; `+∞` when the estimate is exact.
pub fn snr_db(reference: &Image, estimate: &Image) -> Result<f64> {
    if !reference.same_shape(estimate) {
        return invalid(format!(
            "image shapes differ: {}x{} vs {}x{}",
            reference.width(),
            reference.height(),
            estimate.width(),
            estimate.height()
        ));
    }
    snr_db_slices(reference.pixels(), estimate.pixels())
}

pub fn snr_db_slices(reference: &[f64], estimate: &[f64]) -> Result<f64> {
    check_dim(reference.len(), estimate.len())?;
    let (mut signal, mut error) = (0.0, 0.0);
    for (x, e) in reference.iter().zip(estimate) {
        signal += x * x;
        error += (x - e) * (x - e);
    }
    if signal == 0.0 {
        return invalid("SNR is undefined for an all-zero reference");
    }
    if error == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * (signal.sqrt() / error.sqrt()).log10())
}

/// Fills the SNR column of a solver trace against a known original.
#[derive(Debug, Clone)]
pub struct SnrObserver {
    reference: Vec<f64>,
}

impl SnrObserver {
    pub fn new(reference: &Image) -> Result<Self> {
        if reference.pixels().iter().all(|p| *p == 0.0) {
            return invalid("SNR is undefined for an all-zero reference");
        }
        Ok(Self {
            reference: reference.pixels().to_vec(),
        })
    }
}

impl Observer for SnrObserver {
    fn snr(&mut self, x: &Vector) -> Option<f64> {
        snr_db_slices(&self.reference, x.as_slice()).ok()
    }
}
