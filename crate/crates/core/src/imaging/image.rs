use crate::error::{check_dim, invalid, Result};
use crate::linalg::Vector;

/// Grayscale image with row-major real intensities, nominally in `[0, 1]`.
///
/// Values may leave `[0, 1]` during restoration; clamping happens only when
/// an image is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return invalid(format!(
                "image dimensions must be positive, got {width}x{height}"
            ));
        }
        check_dim(width * height, pixels.len())?;
        if pixels.iter().any(|p| !p.is_finite()) {
            return invalid("image pixels must be finite");
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_vector(width: usize, height: usize, v: Vector) -> Result<Self> {
        Self::new(width, height, v.into_inner())
    }

    pub fn to_vector(&self) -> Vector {
        Vector::from_raw(self.pixels.clone())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }
}
