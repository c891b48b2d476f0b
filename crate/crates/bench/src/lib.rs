//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use fbsplit_core::imaging::{add_noise, make_blur_map, phantom, BlurMap, KernelSpec, NoiseSpec};
use fbsplit_core::linalg::{Preconditioner, Vector};
use fbsplit_core::solvers::{IterState, ProxTerm, SmoothTerm};
use fbsplit_core::{Algorithm, LassoProblem, SolverConfig};

/// A `size × size` deblurring problem with the benchmark defaults.
pub struct Deblur {
    pub map: BlurMap,
    pub problem: LassoProblem,
    pub preconditioner: Preconditioner,
    pub start: Vector,
}

pub fn deblur(size: usize, kernel: &str) -> Deblur {
    let spec: KernelSpec = kernel.parse().expect("valid kernel spec");
    let clean = phantom(size, size);
    let map = make_blur_map(spec.build().expect("kernel"), size, size).expect("blur map");
    let degraded = add_noise(
        &map.blur(&clean).unwrap(),
        NoiseSpec::new(1e-3, 42).unwrap(),
    )
    .unwrap();
    let start = degraded.to_vector();
    let smooth =
        SmoothTerm::with_estimated_lipschitz(Arc::new(map.clone()), start.clone()).unwrap();
    let preconditioner = Preconditioner::scalar(size * size, smooth.lipschitz()).unwrap();
    Deblur {
        map,
        problem: LassoProblem::new(smooth, ProxTerm::new(1e-4).unwrap()),
        preconditioner,
        start,
    }
}

impl Deblur {
    pub fn config(&self, algorithm: Algorithm) -> SolverConfig {
        let mut cfg = SolverConfig::new(algorithm, self.preconditioner.clone());
        cfg.stop_tol = 0.0;
        cfg
    }

    /// A state with distinct previous and current iterates, so inertia is live.
    pub fn state(&self) -> IterState {
        let prev = self.start.scale(0.98);
        IterState::new(prev, self.start.clone()).unwrap()
    }
}
