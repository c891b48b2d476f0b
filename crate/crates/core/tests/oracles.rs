//! Checks against independently computed references: brute-force prox
//! minimization, finite differences, and the Fourier diagonalization of
//! periodic convolution.

mod common;

use std::f64::consts::PI;

use fbsplit_core::imaging::{gaussian_kernel, make_blur_map, motion_kernel, Kernel};
use fbsplit_core::linalg::{
    adjoint_defect, estimate_operator_norm, operator_norm, DenseMatrix, ExplicitPair, IdentityMap,
    LinearMap, Preconditioner, Vector,
};
use fbsplit_core::solvers::{
    grad_least_squares, soft_threshold, weighted_resolvent_l1, SmoothTerm,
};
use fbsplit_core::Rng;

/// Minimizes `ρ|y| + (c/2)(y − x)²` by a grid scan then bisection on the
/// sign of the right derivative.
fn brute_prox(x: f64, rho: f64, c: f64) -> f64 {
    let obj = |y: f64| rho * y.abs() + 0.5 * c * (y - x) * (y - x);
    let (lo, hi) = (x.min(0.0) - 0.01, x.max(0.0) + 0.01);
    let steps = ((hi - lo) / 1e-4).ceil() as usize;
    let mut best = lo;
    for k in 0..=steps {
        let y = lo + k as f64 * 1e-4;
        if obj(y) < obj(best) {
            best = y;
        }
    }
    let right_slope = |y: f64| if y >= 0.0 { rho } else { -rho } + c * (y - x);
    let (mut a, mut b) = (best - 1e-4, best + 1e-4);
    while b - a > 1e-9 {
        let mid = 0.5 * (a + b);
        if right_slope(mid) >= 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    let cand = 0.5 * (a + b);
    if obj(0.0) <= obj(cand) {
        0.0
    } else {
        cand
    }
}

#[test]
fn prox_matches_brute_force_minimization() {
    let mut rng = Rng::new(2024);
    for _ in 0..200 {
        let dim = 1 + (rng.next_u64() % 3) as usize;
        let x: Vec<f64> = (0..dim).map(|_| rng.uniform_in(-3.0, 3.0)).collect();
        let phi = rng.uniform_in(0.0, 2.0);
        let st = soft_threshold(&Vector::new(x.clone()).unwrap(), phi).unwrap();
        for (xi, si) in x.iter().zip(st.iter()) {
            assert!((si - brute_prox(*xi, phi, 1.0)).abs() <= 1e-6);
        }

        let lambda = rng.uniform_in(0.05, 2.0);
        let rho = rng.uniform_in(0.0, 1.5);
        let m = common::diagonal(&mut rng, dim, 0.2, 5.0);
        let r = weighted_resolvent_l1(&Vector::new(x.clone()).unwrap(), lambda, rho, &m).unwrap();
        for i in 0..dim {
            let expect = brute_prox(x[i], rho, m.diag()[i] / lambda);
            assert!((r[i] - expect).abs() <= 1e-6, "{} vs {expect}", r[i]);
        }
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = Rng::new(77);
    for _ in 0..20 {
        let n = 1 + (rng.next_u64() % 20) as usize;
        let m = 1 + (rng.next_u64() % 20) as usize;
        let h = SmoothTerm::new(
            std::sync::Arc::new(common::dense(&mut rng, m, n)),
            common::vector(&mut rng, m, 1.0),
            1.0,
        )
        .unwrap();
        let x = common::vector(&mut rng, n, 1.0);
        let g = grad_least_squares(&h, &x).unwrap();
        let f = |v: &[f64]| {
            let ax = h.map().apply(&Vector::new(v.to_vec()).unwrap()).unwrap();
            0.5 * ax.sub(h.observation()).unwrap().norm().powi(2)
        };
        let mut fd = vec![0.0; n];
        for i in 0..n {
            let (mut up, mut dn) = (x.as_slice().to_vec(), x.as_slice().to_vec());
            up[i] += 1e-6;
            dn[i] -= 1e-6;
            fd[i] = (f(&up) - f(&dn)) / 2e-6;
        }
        let fd = Vector::new(fd).unwrap();
        let rel = g.sub(&fd).unwrap().norm() / g.norm().max(1e-12);
        assert!(rel <= 1e-5, "relative error {rel}");
    }
}

#[test]
fn power_iteration_on_diagonal_maps() {
    let mut rng = Rng::new(5);
    for _ in 0..20 {
        let d: Vec<f64> = (0..6).map(|_| rng.uniform_in(-4.0, 4.0)).collect();
        let a = DenseMatrix::from_diagonal(&d).unwrap();
        let expect = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let est = operator_norm(&a).unwrap();
        assert!((est - expect).abs() <= 1e-6 * expect, "{est} vs {expect}");
    }
    let est = estimate_operator_norm(&IdentityMap::new(9), 10, 1e-12, 1).unwrap();
    assert!((est - 1.0).abs() < 1e-12);
}

fn test_kernels() -> Vec<Kernel> {
    let mut rng = Rng::new(99);
    let random = (0..3)
        .map(|_| Kernel::normalized(3, (0..9).map(|_| rng.next_uniform()).collect()).unwrap());
    vec![
        gaussian_kernel(3, 0.8).unwrap(),
        gaussian_kernel(5, 2.0).unwrap(),
        gaussian_kernel(7, 1.0).unwrap(),
        motion_kernel(5, 30.0).unwrap(),
        motion_kernel(7, 90.0).unwrap(),
        Kernel::normalized(3, vec![0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap(),
        Kernel::delta(),
    ]
    .into_iter()
    .chain(random)
    .collect()
}

/// `K̂(u, v) = Σ w_ij exp(iθ·(half − i, half − j))` with `θ = 2π(u/H, v/W)`.
fn symbol(k: &Kernel, u: usize, v: usize, h: usize, w: usize) -> (f64, f64) {
    let half = (k.size() / 2) as f64;
    let (tr, tc) = (
        2.0 * PI * u as f64 / h as f64,
        2.0 * PI * v as f64 / w as f64,
    );
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..k.size() {
        for j in 0..k.size() {
            let phase = tr * (half - i as f64) + tc * (half - j as f64);
            re += k.get(i, j) * phase.cos();
            im += k.get(i, j) * phase.sin();
        }
    }
    (re, im)
}

#[test]
fn blur_acts_diagonally_on_fourier_modes() {
    let (h, w) = (8, 8);
    for k in test_kernels() {
        let map = make_blur_map(k.clone(), w, h).unwrap();
        let mut max_symbol: f64 = 0.0;
        let mut parseval = 0.0;
        for u in 0..h {
            for v in 0..w {
                let (sr, si) = symbol(&k, u, v, h, w);
                max_symbol = max_symbol.max(sr.hypot(si));
                parseval += sr * sr + si * si;
                let phase = |r: usize, c: usize| {
                    2.0 * PI * (u as f64 * r as f64 / h as f64 + v as f64 * c as f64 / w as f64)
                };
                let mut cos = Vec::with_capacity(h * w);
                let mut sin = Vec::with_capacity(h * w);
                for r in 0..h {
                    for c in 0..w {
                        cos.push(phase(r, c).cos());
                        sin.push(phase(r, c).sin());
                    }
                }
                let ac = map.apply(&Vector::new(cos.clone()).unwrap()).unwrap();
                let as_ = map.apply(&Vector::new(sin.clone()).unwrap()).unwrap();
                for p in 0..h * w {
                    // (sr + i·si)(cos + i·sin)
                    assert!((ac[p] - (sr * cos[p] - si * sin[p])).abs() < 1e-12);
                    assert!((as_[p] - (sr * sin[p] + si * cos[p])).abs() < 1e-12);
                }
            }
        }
        let est = operator_norm(&map).unwrap();
        assert!(est <= 1.0 + 1e-6);
        assert!((est - max_symbol).abs() <= 1e-6, "{est} vs {max_symbol}");

        let dense = DenseMatrix::materialize(&map);
        let dense_norm = operator_norm(&dense).unwrap();
        assert!((dense_norm - est).abs() <= 1e-6);
        let frob: f64 = dense.data().iter().map(|a| a * a).sum();
        assert!((frob - parseval).abs() <= 1e-9 * parseval);
    }
}

#[test]
fn blur_norm_on_rectangular_images() {
    for (w, h) in [(16, 9), (5, 12), (31, 31)] {
        for k in test_kernels().into_iter().filter(|k| k.size() <= w.min(h)) {
            let map = make_blur_map(k, w, h).unwrap();
            let est = operator_norm(&map).unwrap();
            assert!(est <= 1.0 + 1e-6 && est > 0.99, "{est}");
        }
    }
}

#[test]
fn adjoints_are_exact() {
    let mut rng = Rng::new(31);
    let mut maps: Vec<Box<dyn LinearMap>> = vec![
        Box::new(common::dense(&mut rng, 7, 4)),
        Box::new(common::dense(&mut rng, 3, 9)),
        Box::new(IdentityMap::new(5)),
    ];
    for k in test_kernels() {
        maps.push(Box::new(make_blur_map(k.clone(), 8, 8).unwrap()));
        maps.push(Box::new(make_blur_map(k, 13, 10).unwrap()));
    }
    for map in &maps {
        assert!(adjoint_defect(map.as_ref(), 100, 4).unwrap() <= 1e-10);
    }
}

#[test]
fn corrupted_adjoint_is_detected() {
    let mut rng = Rng::new(8);
    let a = common::dense(&mut rng, 4, 4);
    let mut wrong = a.transpose();
    wrong.set(1, 2, wrong.get(1, 2) + 0.5);
    let pair = ExplicitPair::new(a, wrong).unwrap();
    assert!(adjoint_defect(&pair, 100, 4).unwrap() > 1e-3);
}

#[test]
fn kernels_sum_to_one() {
    for size in [1, 3, 5, 9, 15] {
        for sigma in [0.3, 1.0, 4.0, 50.0] {
            assert!((gaussian_kernel(size, sigma).unwrap().sum() - 1.0).abs() <= 1e-12);
        }
    }
    for length in 1..20 {
        for angle in [0.0, 17.0, 45.0, 90.0, 133.0, 180.0, -60.0, 359.0] {
            let k = motion_kernel(length, angle).unwrap();
            assert!((k.sum() - 1.0).abs() <= 1e-12);
            assert!(k.weights().iter().all(|w| *w >= 0.0));
        }
    }
}

#[test]
fn scaled_identity_preconditioner_matches_scaled_norm() {
    let mut rng = Rng::new(3);
    let x = common::vector(&mut rng, 10, 2.0);
    let m = Preconditioner::scalar(10, 4.0).unwrap();
    let n = fbsplit_core::linalg::m_norm(&x, &m).unwrap();
    assert!((n - 2.0 * x.norm()).abs() <= 1e-12 * n);
}
