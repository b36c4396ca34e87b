//! Independent reference computations shared by the integration tests.
//!
//! The oracles here use plain complex arithmetic and brute-force search
//! rather than the closed forms of the library.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use bloch_poincare::numerics::{ComplexMat2, ComplexVec2};
use bloch_poincare::{CoherencyMatrix, QuantumState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Vec3 = [f64; 3];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_state(rng: &mut ChaCha8Rng) -> QuantumState {
    loop {
        let v: [f64; 4] = [0; 4].map(|_| rng.gen_range(-1.0..1.0));
        let n: f64 = v.iter().map(|x| x * x).sum();
        if (1e-2..=1.0).contains(&n) {
            return QuantumState::normalize(ComplexVec2::new(c(v[0], v[1]), c(v[2], v[3]))).unwrap();
        }
    }
}

/// Pair with `lo < |<a|b>| < hi`.
pub fn random_pair(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (QuantumState, QuantumState) {
    loop {
        let a = random_state(rng);
        let b = random_state(rng);
        let o = a.inner(&b).norm();
        if o > lo && o < hi {
            return (a, b);
        }
    }
}

pub fn random_unitary(rng: &mut ChaCha8Rng) -> ComplexMat2 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let az: f64 = rng.gen_range(0.0..TAU);
    let r = (1.0 - z * z).sqrt();
    let n = [r * az.cos(), r * az.sin(), z];
    let angle: f64 = rng.gen_range(0.0..PI);
    let phase: f64 = rng.gen_range(0.0..TAU);
    let (s, co) = angle.sin_cos();
    let g = Complex64::from_polar(1.0, phase);
    let i = c(0.0, 1.0);
    // e^{i phase} (cos I - i sin n.sigma)
    ComplexMat2::new(
        g * (co - i * s * n[2]),
        g * (-i * s * c(n[0], -n[1])),
        g * (-i * s * c(n[0], n[1])),
        g * (co + i * s * n[2]),
    )
}

/// Random valid coherency matrix with unit trace scaled by a random intensity.
pub fn random_coherency(rng: &mut ChaCha8Rng) -> CoherencyMatrix {
    let tot: f64 = rng.gen_range(0.2..5.0);
    let frac: f64 = rng.gen_range(0.0..1.0);
    let jxx = tot * frac;
    let jyy = tot - jxx;
    let m = rng.gen_range(0.0..1.0_f64) * (jxx * jyy).sqrt();
    let arg: f64 = rng.gen_range(-PI..PI);
    CoherencyMatrix::new(jxx, jyy, Complex64::from_polar(m, arg)).unwrap()
}

/// Degree of polarization from the two eigenvalues of `J`.
pub fn oracle_polarization(j: &CoherencyMatrix) -> f64 {
    let tr = j.jxx() + j.jyy();
    let det = j.jxx() * j.jyy() - j.jxy().norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let (hi, lo) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
    (hi - lo) / (hi + lo)
}

/// `|j_x'y'|` after rotating the axes by `phi`, computed entry by entry.
pub fn oracle_rotated_coherence(j: &CoherencyMatrix, phi: f64) -> f64 {
    let (s, co) = phi.sin_cos();
    let (xx, yy, xy) = (c(j.jxx(), 0.0), c(j.jyy(), 0.0), j.jxy());
    let yx = xy.conj();
    // E_x' = c E_x + s E_y, E_y' = -s E_x + c E_y
    let jxx = co * co * xx + co * s * (xy + yx) + s * s * yy;
    let jyy = s * s * xx - co * s * (xy + yx) + co * co * yy;
    let jxy = -co * s * xx + co * co * xy - s * s * yx + co * s * yy;
    let d = (jxx.re * jyy.re).sqrt();
    if d == 0.0 {
        0.0
    } else {
        jxy.norm() / d
    }
}

/// Golden-section refinement of a grid maximum of `f` on `[a, b]`.
pub fn refined_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> (f64, f64) {
    let h = (b - a) / (n - 1) as f64;
    let mut best = (a, f(a));
    for k in 1..n {
        let x = a + h * k as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let g = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best.0 - h, best.0 + h);
    for _ in 0..80 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) < f(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let x = 0.5 * (lo + hi);
    let v = f(x);
    if v > best.1 {
        (x, v)
    } else {
        best
    }
}

/// Brute-force maximum of the degree of coherence over frame rotations.
pub fn oracle_max_coherence(j: &CoherencyMatrix) -> (f64, f64) {
    refined_max(|phi| oracle_rotated_coherence(j, phi), 0.0, FRAC_PI_2, 4001)
}

pub fn bloch(s: &QuantumState) -> Vec3 {
    let (a, b) = (s.c0(), s.c1());
    let x = a.conj() * b;
    [2.0 * x.re, 2.0 * x.im, a.norm_sqr() - b.norm_sqr()]
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Summary of a sweep over traceless Hamiltonians with fixed gap `E0`.
#[derive(Debug, Clone, Copy)]
pub struct ArrivalScan {
    /// Smallest time at which `|<1|psi(t)>|` first reaches `|beta|`.
    pub min_population_passage: f64,
    /// Smallest time of a fidelity peak at or above `1 - arrival_tol`.
    pub min_arrival: Option<f64>,
    pub arrivals: usize,
    pub points: usize,
}

/// Scans `n x n` points `(h11 - h22, arg h12)` with `(h11 - h22)^2 + 4|h12|^2 = E0^2`
/// and measures how soon each Hamiltonian carries `(1, 0)` to `target`.
pub fn arrival_scan(target: &QuantumState, e0: f64, hbar: f64, n: usize, arrival_tol: f64) -> ArrivalScan {
    let a: Vec3 = [0.0, 0.0, 1.0];
    let b = bloch(target);
    let beta = target.c1().norm();
    let omega = e0 / hbar;
    let mut scan = ArrivalScan {
        min_population_passage: f64::INFINITY,
        min_arrival: None,
        arrivals: 0,
        points: n * n,
    };
    for i in 0..n {
        let d = -e0 + 2.0 * e0 * (i as f64 + 0.5) / n as f64;
        let h12 = 0.5 * (e0 * e0 - d * d).max(0.0).sqrt();
        let reach = 2.0 * h12 / e0;
        if reach >= beta {
            let t = 2.0 / omega * (beta / reach).min(1.0).asin();
            scan.min_population_passage = scan.min_population_passage.min(t);
        }
        for k in 0..n {
            let phi = TAU * k as f64 / n as f64;
            let axis = [2.0 * h12 * phi.cos() / e0, 2.0 * h12 * phi.sin() / e0, d / e0];
            let na = dot(&axis, &a);
            let perp = [a[0] - na * axis[0], a[1] - na * axis[1], a[2] - na * axis[2]];
            let side = cross(&axis, &a);
            // r(t).b = na (n.b) + (perp.b) cos(wt) + (side.b) sin(wt)
            let (p, q) = (dot(&perp, &b), dot(&side, &b));
            let peak = 0.5 * (1.0 + na * dot(&axis, &b) + p.hypot(q));
            if peak >= 1.0 - arrival_tol {
                let t = q.atan2(p).rem_euclid(TAU) / omega;
                scan.arrivals += 1;
                scan.min_arrival = Some(scan.min_arrival.map_or(t, |m: f64| m.min(t)));
            }
        }
    }
    scan
}

/// `<|E_theta|^2>` for a field built from two incoherent frequency
/// components along the eigenvectors of `J`, averaged over a common period.
pub fn ensemble_intensity(j: &CoherencyMatrix, theta: f64, eps: f64) -> f64 {
    let (xx, yy, xy) = (j.jxx(), j.jyy(), j.jxy());
    let tr = xx + yy;
    let disc = ((xx - yy).powi(2) + 4.0 * xy.norm_sqr()).sqrt();
    let lambda = [(tr + disc) / 2.0, (tr - disc) / 2.0];
    let vectors: [[Complex64; 2]; 2] = if xy.norm() > 1e-300 {
        let v = |l: f64| {
            let (u0, u1) = (xy, c(l - xx, 0.0));
            let n = (u0.norm_sqr() + u1.norm_sqr()).sqrt();
            [u0 / n, u1 / n]
        };
        [v(lambda[0]), v(lambda[1])]
    } else if xx >= yy {
        [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
    } else {
        [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
    };
    let (s, co) = theta.sin_cos();
    let n = 256;
    let mut acc = 0.0;
    for m in 0..n {
        let t = TAU * m as f64 / n as f64;
        let mut ex = c(0.0, 0.0);
        let mut ey = c(0.0, 0.0);
        for (k, w) in [1.0, 3.0].iter().enumerate() {
            let amp = Complex64::from_polar(lambda[k].max(0.0).sqrt(), -w * t);
            ex += amp * vectors[k][0];
            ey += amp * vectors[k][1];
        }
        let e = ex * co + ey * Complex64::from_polar(1.0, eps) * s;
        acc += e.norm_sqr();
    }
    acc / n as f64
}

/// Arrival time for a run of a timed closure.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}
