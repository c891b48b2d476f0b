use crate::error::{invalid, Result};
use crate::imaging::Image;
use crate::rng::Rng;

/// Additive white Gaussian noise with standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return invalid(format!("noise sigma must be finite and >= 0, got {sigma}"));
        }
        Ok(Self { sigma, seed })
    }
}

/// `pixelᵢ + sigma·gᵢ`, drawing `gᵢ` in row-major order from a fresh
/// generator seeded with `spec.seed`. No clamping.
pub fn add_noise(img: &Image, spec: NoiseSpec) -> Result<Image> {
    let spec = NoiseSpec::new(spec.sigma, spec.seed)?;
    if spec.sigma == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = Rng::new(spec.seed);
    let pixels = img
        .pixels()
        .iter()
        .map(|p| p + spec.sigma * rng.next_gaussian())
        .collect();
    Image::new(img.width(), img.height(), pixels)
}
