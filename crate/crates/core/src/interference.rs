//! Interference of partially coherent light vibrations, of two elliptically
//! polarized beams, and of quantum probability amplitudes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::QuantumState;
use crate::error::{Error, Result};
use crate::numerics::dot3;
use crate::polarization::{stokes_from_coherency, CoherencyMatrix};

/// Analyzer at angle `theta` from `x` with a phase delay `epsilon` on `Ey`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalInterferenceInput {
    pub j: CoherencyMatrix,
    pub theta: f64,
    pub epsilon: f64,
}

impl ClassicalInterferenceInput {
    pub fn new(j: CoherencyMatrix, theta: f64, epsilon: f64) -> Result<Self> {
        for (name, value) in [("theta", theta), ("epsilon", epsilon)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        Ok(Self { j, theta, epsilon })
    }

    /// `(I_x, I_y) = (Jxx cos^2 theta, Jyy sin^2 theta)`.
    pub fn component_intensities(&self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.j.jxx() * c * c, self.j.jyy() * s * s)
    }
}

/// `I = I_x + I_y + 2 sqrt(I_x I_y) |j| cos(beta_xy - epsilon)`.
///
/// The cross term carries the sign of `cos(theta) sin(theta)`, so the result
/// is the time-averaged `|E_theta|^2` for every analyzer angle, not only the
/// first quadrant.
pub fn classical_intensity(input: &ClassicalInterferenceInput) -> f64 {
    let (ix, iy) = input.component_intensities();
    let j = input.j.degree_of_coherence();
    let (s, c) = input.theta.sin_cos();
    let sign = if s * c < 0.0 { -1.0 } else { 1.0 };
    let cross = 2.0 * sign * (ix * iy).sqrt() * j.norm() * (j.arg() - input.epsilon).cos();
    (ix + iy + cross).max(0.0)
}

/// `V = 2 sqrt(I_x I_y) |j| / (I_x + I_y)`, zero when no light reaches the
/// analyzer.
pub fn fringe_visibility(input: &ClassicalInterferenceInput) -> f64 {
    let (ix, iy) = input.component_intensities();
    if ix + iy <= 0.0 {
        return 0.0;
    }
    2.0 * (ix * iy).sqrt() * input.j.degree_of_coherence().norm() / (ix + iy)
}

/// Superposition of two coherent beams whose polarization states are
/// `theta_poincare` apart on the Poincaré sphere; `delta` is the phase advance
/// of the first beam over the matching component of the second.
pub fn pancharatnam_intensity(i_a: f64, i_b: f64, theta_poincare: f64, delta: f64) -> Result<f64> {
    for (name, value) in [("i_a", i_a), ("i_b", i_b)] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter {
                name,
                value,
                reason: "intensity must be finite and nonnegative",
            });
        }
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta_poincare) {
        return Err(Error::AngleOutOfRange {
            name: "theta_poincare",
            value: theta_poincare,
            range: "[0, pi]",
        });
    }
    Ok(i_a + i_b + 2.0 * (i_a * i_b).sqrt() * (0.5 * theta_poincare).cos() * delta.cos())
}

/// `psi = a |A> + b |B>` with unnormalized complex weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuantumInterferenceInput {
    pub a_amp: Complex64,
    pub b_amp: Complex64,
    pub state_a: QuantumState,
    pub state_b: QuantumState,
}

impl QuantumInterferenceInput {
    pub fn superposition(&self) -> crate::numerics::ComplexVec2 {
        self.state_a.amplitudes().scale(self.a_amp) + self.state_b.amplitudes().scale(self.b_amp)
    }

    /// `<psi|psi>` by direct evaluation.
    pub fn direct_probability(&self) -> f64 {
        self.superposition().norm_sqr()
    }
}

/// `p = p_a + p_b + 2 sqrt(p_a p_b) |<A|B>| cos(phi_AB - (phi_a - phi_b))`.
pub fn quantum_probability(input: &QuantumInterferenceInput) -> f64 {
    let pa = input.a_amp.norm_sqr();
    let pb = input.b_amp.norm_sqr();
    let ab = input.state_a.inner(&input.state_b);
    let phase = ab.arg() - (input.a_amp.arg() - input.b_amp.arg());
    pa + pb + 2.0 * (pa * pb).sqrt() * ab.norm() * phase.cos()
}

/// Degree of coherence against the half-angle cosines on both spheres.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalogyTriple {
    pub coherence: f64,
    pub poincare_cosine: f64,
    pub bloch_cosine: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Tolerance on `|Jxx - Jyy| / tr J` for a matrix to count as being in the
/// equal-intensity frame.
pub const EQUAL_FRAME_TOL: f64 = 1e-9;

/// Compares `|j_xy|` of `j` (which must have equal diagonal entries) with
/// `cos(theta_P / 2)`, where `theta_P` separates the Jones vectors `a` and `b`
/// on the Poincaré sphere, and with `cos(theta_B / 2) = |<A|B>|`.
pub fn analogy_triple(
    j: &CoherencyMatrix,
    a: &QuantumState,
    b: &QuantumState,
    tolerance: f64,
) -> Result<AnalogyTriple> {
    let tr = j.trace();
    if tr <= 0.0 {
        return Err(Error::ZeroIntensity);
    }
    if (j.jxx() - j.jyy()).abs() > EQUAL_FRAME_TOL * tr {
        return Err(Error::InvalidCoherency(format!(
            "Jxx = {} and Jyy = {} differ; rotate to the equal-intensity frame first",
            j.jxx(),
            j.jyy()
        )));
    }
    let sa = stokes_from_coherency(&CoherencyMatrix::from_jones_vector(a.amplitudes())?)?;
    let sb = stokes_from_coherency(&CoherencyMatrix::from_jones_vector(b.amplitudes())?)?;
    let cos_theta = dot3(&sa.reduced(), &sb.reduced()).clamp(-1.0, 1.0);
    let coherence = j.degree_of_coherence().norm();
    let poincare_cosine = (0.5 * (1.0 + cos_theta)).sqrt();
    let bloch_cosine = a.inner(b).norm().min(1.0);
    let spread = coherence.max(poincare_cosine).max(bloch_cosine) - coherence.min(poincare_cosine).min(bloch_cosine);
    Ok(AnalogyTriple {
        coherence,
        poincare_cosine,
        bloch_cosine,
        tolerance,
        pass: spread <= tolerance,
    })
}

/// One point of an analyzer sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub theta: f64,
    pub epsilon: f64,
    pub intensity: f64,
    pub visibility: f64,
}

/// Evaluates the classical law on the grid `thetas x epsilons`, theta-major.
pub fn intensity_sweep(j: &CoherencyMatrix, thetas: &[f64], epsilons: &[f64]) -> Result<Vec<SweepPoint>> {
    let mut out = Vec::with_capacity(thetas.len() * epsilons.len());
    for &theta in thetas {
        for &epsilon in epsilons {
            let input = ClassicalInterferenceInput::new(*j, theta, epsilon)?;
            out.push(SweepPoint {
                theta,
                epsilon,
                intensity: classical_intensity(&input),
                visibility: fringe_visibility(&input),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    use proptest::prelude::*;

    use super::*;
    use crate::numerics::{hermitian_eigen, time_average_quadrature, ComplexVec2};

    fn cm(jxx: f64, jyy: f64, re: f64, im: f64) -> CoherencyMatrix {
        CoherencyMatrix::new(jxx, jyy, Complex64::new(re, im)).unwrap()
    }

    fn state(c0: Complex64, c1: Complex64) -> QuantumState {
        QuantumState::normalize(ComplexVec2::new(c0, c1)).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Two incoherent frequency components along the eigenvectors of J.
    fn ensemble_intensity(j: &CoherencyMatrix, theta: f64, eps: f64) -> f64 {
        let eig = hermitian_eigen(&j.to_matrix()).unwrap();
        let (s, co) = theta.sin_cos();
        let period = 2.0 * PI;
        time_average_quadrature(
            |t| {
                let mut e = ComplexVec2::new(c(0.0, 0.0), c(0.0, 0.0));
                for (k, omega) in [1.0, 2.0].iter().enumerate() {
                    let amp = eig.values[k].max(0.0).sqrt();
                    e = e + eig.vectors[k].scale(Complex64::from_polar(amp, -omega * t));
                }
                let e_theta = e.c0() * co + e.c1() * Complex64::from_polar(1.0, eps) * s;
                e_theta.norm_sqr()
            },
            period,
            64,
        )
        .unwrap()
    }

    #[test]
    fn classical_examples() {
        let u = cm(0.5, 0.5, 0.0, 0.0);
        let i = ClassicalInterferenceInput::new(u, 0.3, 1.1).unwrap();
        let (ix, iy) = i.component_intensities();
        assert!((classical_intensity(&i) - (ix + iy)).abs() < 1e-15);

        let full = CoherencyMatrix::from_jones_vector(&ComplexVec2::new(c(2.0, 0.0), Complex64::from_polar(1.0, 0.4)))
            .unwrap();
        let i = ClassicalInterferenceInput::new(full, 0.6, -0.4).unwrap();
        let (ix, iy) = i.component_intensities();
        assert!((classical_intensity(&i) - (ix.sqrt() + iy.sqrt()).powi(2)).abs() < 1e-12);

        let i = ClassicalInterferenceInput::new(cm(3.0, 1.0, 1.0, 0.0), FRAC_PI_4, 0.0).unwrap();
        assert!((classical_intensity(&i) - 3.0).abs() < 1e-12);
        assert!((ensemble_intensity(&i.j, FRAC_PI_4, 0.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pancharatnam_examples() {
        assert!((pancharatnam_intensity(1.0, 2.0, PI, 0.7).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(pancharatnam_intensity(1.0, 1.0, 0.0, 0.0).unwrap(), 4.0);
        let v = pancharatnam_intensity(1.0, 1.0, FRAC_PI_2, 0.0).unwrap();
        assert!((v - (2.0 + 2.0_f64.sqrt())).abs() < 1e-14);
        // the same number from amplitudes with |<A|B>| = cos(pi/4)
        let q = QuantumInterferenceInput {
            a_amp: c(1.0, 0.0),
            b_amp: c(1.0, 0.0),
            state_a: QuantumState::ground(),
            state_b: state(c(1.0, 0.0), c(1.0, 0.0)),
        };
        assert!((quantum_probability(&q) - v).abs() < 1e-14);
        assert!(pancharatnam_intensity(-1.0, 1.0, 0.0, 0.0).is_err());
        assert!(pancharatnam_intensity(1.0, 1.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn quantum_examples() {
        let h = FRAC_1_SQRT_2;
        let q = QuantumInterferenceInput {
            a_amp: c(h, 0.0),
            b_amp: c(0.0, h),
            state_a: QuantumState::ground(),
            state_b: QuantumState::excited(),
        };
        assert!((quantum_probability(&q) - 1.0).abs() < 1e-15);
        let same = QuantumInterferenceInput {
            a_amp: c(h, 0.0),
            b_amp: c(h, 0.0),
            state_a: QuantumState::ground(),
            state_b: QuantumState::ground(),
        };
        assert!((quantum_probability(&same) - 2.0).abs() < 1e-15);
        let opposite = QuantumInterferenceInput {
            b_amp: Complex64::from_polar(h, PI),
            ..same
        };
        assert!(quantum_probability(&opposite).abs() < 1e-15);
    }

    #[test]
    fn analogy_examples() {
        let a = QuantumState::ground();
        let t = analogy_triple(&cm(1.0, 1.0, 1.0, 0.0), &a, &a, 1e-10).unwrap();
        assert!(t.pass);
        assert!((t.coherence - 1.0).abs() < 1e-15 && (t.poincare_cosine - 1.0).abs() < 1e-15);

        let t = analogy_triple(&cm(1.0, 1.0, 0.0, 0.0), &a, &QuantumState::excited(), 1e-10).unwrap();
        assert_eq!((t.coherence, t.bloch_cosine), (0.0, 0.0));
        assert!(t.poincare_cosine < 1e-12);

        let b = state(c(1.0, 0.0), c(1.0, 0.0));
        let t = analogy_triple(&cm(1.0, 1.0, FRAC_1_SQRT_2, 0.0), &a, &b, 1e-10).unwrap();
        assert!(t.pass);
        for v in [t.coherence, t.poincare_cosine, t.bloch_cosine] {
            assert!((v - FRAC_1_SQRT_2).abs() < 1e-10);
        }
        assert!(analogy_triple(&cm(3.0, 1.0, 1.0, 0.0), &a, &b, 1e-10).is_err());
    }

    #[test]
    fn sweep_is_theta_major() {
        let s = intensity_sweep(&cm(3.0, 1.0, 1.0, 0.0), &[0.0, FRAC_PI_4], &[0.0, PI]).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!((s[1].theta, s[1].epsilon), (0.0, PI));
        assert!((s[2].intensity - 3.0).abs() < 1e-12);
        assert!((s[3].intensity - 1.0).abs() < 1e-12);
    }

    fn arb_j() -> impl Strategy<Value = CoherencyMatrix> {
        (0.0..3.0f64, 0.0..3.0f64, 0.0..1.0f64, -PI..PI).prop_map(|(x, y, r, arg)| {
            let m = r * (x * y).sqrt();
            CoherencyMatrix::new(x, y, Complex64::from_polar(m, arg)).unwrap()
        })
    }

    fn arb_state() -> impl Strategy<Value = QuantumState> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
            .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
            .prop_map(|(a, b, cc, d)| state(c(a, b), c(cc, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn quantum_law_is_identity(
            ar in -2.0..2.0f64, ai in -2.0..2.0f64, br in -2.0..2.0f64, bi in -2.0..2.0f64,
            sa in arb_state(), sb in arb_state(),
        ) {
            let q = QuantumInterferenceInput { a_amp: c(ar, ai), b_amp: c(br, bi), state_a: sa, state_b: sb };
            prop_assert!((quantum_probability(&q) - q.direct_probability()).abs() < 1e-12);
        }

        #[test]
        fn classical_intensity_is_nonnegative(j in arb_j(), theta in -PI..PI, eps in -PI..PI) {
            let i = ClassicalInterferenceInput::new(j, theta, eps).unwrap();
            let (ix, iy) = i.component_intensities();
            let raw = ix + iy + 2.0 * theta.sin().signum() * theta.cos().signum()
                * (ix * iy).sqrt() * j.degree_of_coherence().norm() * (j.degree_of_coherence().arg() - eps).cos();
            prop_assert!(raw >= -1e-12);
            prop_assert!(classical_intensity(&i) >= 0.0);
        }

        #[test]
        fn visibility_is_coherence_at_equal_intensities(x in 0.1..3.0f64, r in 0.0..1.0f64, arg in -PI..PI) {
            let j = CoherencyMatrix::new(x, x, Complex64::from_polar(r * x, arg)).unwrap();
            let i = ClassicalInterferenceInput::new(j, FRAC_PI_4, 0.0).unwrap();
            prop_assert!((fringe_visibility(&i) - j.degree_of_coherence().norm()).abs() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn classical_law_matches_field_ensemble(j in arb_j(), theta in -PI..PI, eps in -PI..PI) {
            let i = ClassicalInterferenceInput::new(j, theta, eps).unwrap();
            let scale = j.trace().max(1.0);
            prop_assert!((classical_intensity(&i) - ensemble_intensity(&j, theta, eps)).abs() < 1e-10 * scale);
        }
    }
}
