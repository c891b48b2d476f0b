use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, invalid, Error, Result};

/// Square blur kernel of odd size whose weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
}

impl Kernel {
    /// Normalizes nonnegative raw weights to unit sum.
    pub fn normalized(size: usize, raw: Vec<f64>) -> Result<Self> {
        if size == 0 || size % 2 == 0 {
            return invalid(format!("kernel size must be odd and positive, got {size}"));
        }
        check_dim(size * size, raw.len())?;
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return invalid("kernel weights must be finite and nonnegative");
        }
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return invalid("kernel weights sum to zero");
        }
        Ok(Self {
            size,
            weights: raw.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn delta() -> Self {
        Self {
            size: 1,
            weights: vec![1.0],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Row-major `size × size` weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.size + col]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Isotropic Gaussian `exp(−((i−c)² + (j−c)²)/(2σ²))`, normalized.
pub fn gaussian_kernel(size: usize, sigma: f64) -> Result<Kernel> {
    if size == 0 || size % 2 == 0 {
        return invalid(format!(
            "gaussian kernel size must be odd and positive, got {size}"
        ));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return invalid(format!(
            "gaussian sigma must be finite and > 0, got {sigma}"
        ));
    }
    let c = (size as f64 - 1.0) / 2.0;
    let denom = 2.0 * sigma * sigma;
    let mut raw = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let (di, dj) = (i as f64 - c, j as f64 - c);
            raw.push((-(di * di + dj * dj) / denom).exp());
        }
    }
    Kernel::normalized(size, raw)
}

/// Linear motion blur: a Bresenham-rasterized segment of `length` cells
/// through the kernel center, at `angle_degrees` counterclockwise from the
/// positive column axis.
pub fn motion_kernel(length: usize, angle_degrees: f64) -> Result<Kernel> {
    if length == 0 {
        return invalid("motion kernel length must be at least 1");
    }
    if !angle_degrees.is_finite() {
        return invalid("motion kernel angle must be finite");
    }
    let theta = angle_degrees.to_radians();
    // Rows grow downward, so a counterclockwise angle moves up.
    let (ux, uy) = (theta.cos(), -theta.sin());
    let half = (length as f64 - 1.0) / 2.0;
    // Ties round down so an even length keeps its cell count.
    let snap = |v: f64| (v - 0.5).ceil() as i64;
    let (x0, y0) = (snap(-half * ux), snap(-half * uy));
    let (x1, y1) = (snap(half * ux), snap(half * uy));

    let cells = bresenham(x0, y0, x1, y1);
    let reach = cells
        .iter()
        .map(|(x, y)| x.abs().max(y.abs()))
        .max()
        .unwrap_or(0);
    let size = 2 * reach as usize + 1;
    let c = reach;
    let mut raw = vec![0.0; size * size];
    for (x, y) in cells {
        raw[((y + c) as usize) * size + (x + c) as usize] = 1.0;
    }
    Kernel::normalized(size, raw)
}

fn bresenham(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<(i64, i64)> {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let (mut x, mut y) = (x0, y0);
    let mut out = Vec::new();
    loop {
        out.push((x, y));
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    out
}

/// Textual kernel description: `gaussian:size,sigma`, `motion:length,angle`
/// or `delta`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Gaussian { size: usize, sigma: f64 },
    Motion { length: usize, angle_degrees: f64 },
    Delta,
}

impl KernelSpec {
    pub fn build(&self) -> Result<Kernel> {
        match *self {
            KernelSpec::Gaussian { size, sigma } => gaussian_kernel(size, sigma),
            KernelSpec::Motion {
                length,
                angle_degrees,
            } => motion_kernel(length, angle_degrees),
            KernelSpec::Delta => Ok(Kernel::delta()),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Gaussian { size, sigma } => write!(f, "gaussian:{size},{sigma}"),
            KernelSpec::Motion {
                length,
                angle_degrees,
            } => write!(f, "motion:{length},{angle_degrees}"),
            KernelSpec::Delta => f.write_str("delta"),
        }
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    /// Parses and validates, so `gaussian:4,2` fails here.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "delta" {
            return Ok(KernelSpec::Delta);
        }
        let bad = || Error::InvalidArgument(format!("malformed kernel spec `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        let int = a.trim().parse::<usize>().map_err(|_| bad())?;
        let real = b.trim().parse::<f64>().map_err(|_| bad())?;
        let spec = match kind.trim() {
            "gaussian" => KernelSpec::Gaussian {
                size: int,
                sigma: real,
            },
            "motion" => KernelSpec::Motion {
                length: int,
                angle_degrees: real,
            },
            other => return invalid(format!("unknown kernel kind `{other}`")),
        };
        spec.build()?;
        Ok(spec)
    }
}
