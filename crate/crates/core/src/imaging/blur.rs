use crate::error::{invalid, Result};
use crate::imaging::{Image, Kernel};
use crate::linalg::LinearMap;

/// 2-D periodic convolution with a kernel on a `width × height` grid,
/// acting on row-major flattened images.
///
/// The adjoint is periodic correlation with the same kernel.
#[derive(Debug, Clone)]
pub struct BlurMap {
    kernel: Kernel,
    width: usize,
    height: usize,
    /// Nonzero taps as `(row offset, column offset, weight)`.
    taps: Vec<(usize, usize, f64)>,
}

pub fn make_blur_map(kernel: Kernel, width: usize, height: usize) -> Result<BlurMap> {
    if width == 0 || height == 0 {
        return invalid("blur grid must have positive dimensions");
    }
    let s = kernel.size();
    if s > width.min(height) {
        return invalid(format!(
            "kernel size {s} exceeds the image extent {width}x{height}"
        ));
    }
    let half = (s - 1) / 2;
    let mut taps = Vec::new();
    for i in 0..s {
        for j in 0..s {
            let w = kernel.get(i, j);
            if w != 0.0 {
                // out[r][c] += w · x[r + half − i][c + half − j]  (mod grid).
                let dr = (half + height - i) % height;
                let dc = (half + width - j) % width;
                taps.push((dr, dc, w));
            }
        }
    }
    Ok(BlurMap {
        kernel,
        width,
        height,
        taps,
    })
}

impl BlurMap {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn blur(&self, img: &Image) -> Result<Image> {
        let out = self.apply(&img.to_vector())?;
        Image::from_vector(self.width, self.height, out)
    }

    /// `out[r][c] = Σ_taps w · src[(r + dr) mod H][(c + dc) mod W]`, with
    /// taps summed in kernel order for every pixel.
    fn shifted_sum(&self, src: &[f64], out: &mut [f64], forward: bool) {
        let (w, h) = (self.width, self.height);
        out.iter_mut().for_each(|o| *o = 0.0);
        for r in 0..h {
            let out_row = &mut out[r * w..(r + 1) * w];
            for &(dr, dc, weight) in &self.taps {
                let (dr, dc) = if forward {
                    (dr, dc)
                } else {
                    ((h - dr) % h, (w - dc) % w)
                };
                let src_row = &src[((r + dr) % h) * w..((r + dr) % h + 1) * w];
                // Columns c with c + dc < w read src_row[c + dc]; the rest wrap.
                let split = w - dc;
                for (o, x) in out_row[..split].iter_mut().zip(&src_row[dc..]) {
                    *o += weight * x;
                }
                for (o, x) in out_row[split..].iter_mut().zip(&src_row[..dc]) {
                    *o += weight * x;
                }
            }
        }
    }
}

impl LinearMap for BlurMap {
    fn dim_in(&self) -> usize {
        self.width * self.height
    }

    fn dim_out(&self) -> usize {
        self.width * self.height
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.shifted_sum(x, out, true);
    }

    fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        self.shifted_sum(y, out, false);
    }
}
