//! Seeded SplitMix64 generator with Box–Muller normals.
//!
//! The sequence is fully specified by the seed and identical on every
//! platform, which keeps degraded images and random test problems
//! reproducible.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_M53
    }

    /// Standard normal via Box–Muller; always consumes exactly two uniforms.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_uniform().max(TWO_POW_M53);
        let u2 = self.next_uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_uniform()
    }

    pub fn gaussian_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_gaussian()).collect()
    }
}

/// Functional form: returns the draw and the advanced generator.
pub fn rng_next_uniform(r: Rng) -> (f64, Rng) {
    let mut r = r;
    let v = r.next_uniform();
    (v, r)
}

/// Functional form of [`Rng::next_gaussian`].
pub fn gaussian_sample(r: Rng) -> (f64, Rng) {
    let mut r = r;
    let v = r.next_gaussian();
    (v, r)
}
