use crate::imaging::Image;

/// Deterministic synthetic test scene: a dark background with a bright disk,
/// a ring, a bar, a ramp and a few thin strokes. Sharp edges and flat
/// regions make blur and its removal easy to see and measure.
pub fn phantom(width: usize, height: usize) -> Image {
    assert!(width >= 1 && height >= 1);
    let (w, h) = (width as f64, height as f64);
    let mut px = vec![0.0; width * height];
    for r in 0..height {
        for c in 0..width {
            // Normalized coordinates in [0, 1).
            let (y, x) = (r as f64 / h, c as f64 / w);
            let mut v: f64 = 0.05;

            let d = ((x - 0.32).powi(2) + (y - 0.34).powi(2)).sqrt();
            if d < 0.2 {
                v = 0.9;
            }
            if d < 0.08 {
                v = 0.35;
            }

            let ring = ((x - 0.72).powi(2) + (y - 0.7).powi(2)).sqrt();
            if (0.12..0.18).contains(&ring) {
                v = 0.75;
            }

            if (0.62..0.9).contains(&x) && (0.12..0.24).contains(&y) {
                v = 0.6;
            }

            if (0.08..0.5).contains(&x) && (0.72..0.9).contains(&y) {
                v = 0.15 + 0.8 * (x - 0.08) / 0.42;
            }

            if c % 16 == 13 && (0.4..0.6).contains(&y) {
                v = 1.0;
            }
            px[r * width + c] = v.clamp(0.0, 1.0);
        }
    }
    Image::new(width, height, px).expect("phantom pixels are finite")
}
