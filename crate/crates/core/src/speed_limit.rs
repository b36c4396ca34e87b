//! Optimal-speed Hamiltonians between two pure states.
//!
//! Two synthesis routes are provided. [`SpeedLimit::synthesize_min_time`]
//! fixes the energy gap `E0` and works in the basis where the initial state is
//! `|0>`. [`SpeedLimit::synthesize_max_uncertainty`] fixes the energy
//! dispersion `E` of a traceless Hamiltonian and works for any pair of states.
//! Every synthesized Hamiltonian is checked by evolving the initial state
//! forward and comparing with the target.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{fidelity, fubini_study_angle, QuantumState};
use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eigen, matrix_exponential_su2, ComplexMat2, ComplexVec2, PauliDecomposition, Vec3,
    CLOSED_FORM_TOL, I,
};

/// Below this overlap modulus the endpoints are treated as orthogonal.
pub const ORTHOGONAL_OVERLAP: f64 = 1e-9;
/// Endpoints closer than this Fubini-Study angle are treated as identical.
pub const DEGENERATE_ANGLE: f64 = 1e-12;

/// A Hermitian 2x2 Hamiltonian with its spectral and Pauli data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hamiltonian2 {
    matrix: ComplexMat2,
    eigenvalues: [f64; 2],
    eigenvectors: [QuantumState; 2],
    a0: f64,
    axis: Vec3,
    strength: f64,
}

impl Hamiltonian2 {
    pub fn new(matrix: ComplexMat2) -> Result<Self> {
        let eig = hermitian_eigen(&matrix)?;
        let p = PauliDecomposition::of(&matrix);
        let strength = p.strength();
        let axis = if strength > 0.0 {
            [p.a[0] / strength, p.a[1] / strength, p.a[2] / strength]
        } else {
            [0.0, 0.0, 1.0]
        };
        Ok(Self {
            matrix,
            eigenvalues: eig.values,
            eigenvectors: [
                QuantumState::normalize(eig.vectors[0])?,
                QuantumState::normalize(eig.vectors[1])?,
            ],
            a0: p.a0,
            axis,
            strength,
        })
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.matrix
    }

    /// `[E-, E+]`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        self.eigenvalues
    }

    /// `[|E->, |E+>]`.
    pub fn eigenvectors(&self) -> &[QuantumState; 2] {
        &self.eigenvectors
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    /// `|a|`, half the energy gap.
    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn gap(&self) -> f64 {
        self.eigenvalues[1] - self.eigenvalues[0]
    }

    pub fn h11(&self) -> f64 {
        self.matrix.get(0, 0).re
    }

    pub fn h22(&self) -> f64 {
        self.matrix.get(1, 1).re
    }

    pub fn h12(&self) -> Complex64 {
        self.matrix.get(0, 1)
    }

    /// `H - tr(H)/2 I`.
    pub fn traceless(&self) -> ComplexMat2 {
        self.matrix - ComplexMat2::identity().scale(Complex64::new(self.a0, 0.0))
    }

    /// `|(E+ - E-)^2 - (h11 - h22)^2 - 4|h12|^2|`.
    pub fn constraint_residual(&self) -> f64 {
        let d = self.h11() - self.h22();
        (self.gap().powi(2) - d * d - 4.0 * self.h12().norm_sqr()).abs()
    }

    /// Squared overlaps `[|<E-|a>|^2, |<E+|a>|^2, |<E-|a_perp>|^2, |<E+|a_perp>|^2]`.
    pub fn eigenbasis_overlaps(&self, a: &QuantumState) -> [f64; 4] {
        let perp = a.orthogonal();
        let [m, p] = &self.eigenvectors;
        [
            fidelity(m, a),
            fidelity(p, a),
            fidelity(m, &perp),
            fidelity(p, &perp),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    TimeMinimization,
    UncertaintyMaximization,
}

/// A synthesized Hamiltonian with its minimal traversal time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SynthesisResult {
    pub hamiltonian: Hamiltonian2,
    pub t_min: f64,
    /// Energy uncertainty in the initial state.
    pub delta_e: f64,
    pub route: Route,
    pub initial: QuantumState,
    pub target: QuantumState,
    pub theta_ab: f64,
    /// Fidelity of the forward-evolved initial state with the target at `t_min`.
    pub endpoint_fidelity: f64,
}

/// Geodesic length `s0`, traversed length `s` and their ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub s0: f64,
    pub s: f64,
    pub eta_qm: f64,
}

/// Evolution and synthesis with a fixed `hbar`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedLimit {
    hbar: f64,
    endpoint_tolerance: f64,
}

impl Default for SpeedLimit {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            endpoint_tolerance: CLOSED_FORM_TOL,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

/// Unitary `V` with `V a = (1, 0)`.
pub fn basis_alignment(a: &QuantumState) -> ComplexMat2 {
    let (a0, a1) = (a.c0(), a.c1());
    ComplexMat2::new(a0.conj(), a1.conj(), -a1, a0)
}

impl SpeedLimit {
    pub fn new(hbar: f64) -> Result<Self> {
        Ok(Self {
            hbar: positive("hbar", hbar)?,
            ..Self::default()
        })
    }

    /// Sets the endpoint gate: evolved fidelity must reach `1 - tol`.
    pub fn with_tolerance(self, tol: f64) -> Result<Self> {
        Ok(Self {
            endpoint_tolerance: positive("tolerance", tol)?,
            ..self
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn endpoint_tolerance(&self) -> f64 {
        self.endpoint_tolerance
    }

    /// `exp(-i H t / hbar)`.
    pub fn propagator(&self, h: &ComplexMat2, t: f64) -> Result<ComplexMat2> {
        matrix_exponential_su2(h, t / self.hbar)
    }

    pub fn evolve(&self, h: &ComplexMat2, a: &QuantumState, t: f64) -> Result<QuantumState> {
        a.evolve(&self.propagator(h, t)?)
    }

    fn gate(&self, h: &ComplexMat2, a: &QuantumState, b: &QuantumState, t: f64) -> Result<f64> {
        let f = fidelity(&self.evolve(h, a, t)?, b);
        if f < 1.0 - self.endpoint_tolerance {
            return Err(Error::EndpointMismatch {
                fidelity: f,
                tolerance: self.endpoint_tolerance,
            });
        }
        Ok(f)
    }

    /// Time-minimizing Hamiltonian with energy gap `e0` from `a = (1, 0)`
    /// (any global phase) to `b = (alpha, beta)`.
    ///
    /// `h12 = (E0/2) e^{-i phi}` with `phi = phi_beta - phi_alpha + pi/2`,
    /// `h11 = h22 = -(E0/2) phi_alpha / x` and `t_min = 2 hbar x / E0` where
    /// `x = arcsin |beta|`.
    pub fn synthesize_min_time(
        &self,
        a: &QuantumState,
        b: &QuantumState,
        e0: f64,
    ) -> Result<SynthesisResult> {
        positive("e0", e0)?;
        if a.c1().norm() > CLOSED_FORM_TOL {
            return Err(Error::NotReferenceState);
        }
        // Express b relative to the phase of a so that a is exactly |0>.
        let rephase = a.c0().conj() / a.c0().norm();
        let (alpha, beta) = (b.c0() * rephase, b.c1() * rephase);
        let x = beta.norm().atan2(alpha.norm());
        if x <= 0.5 * DEGENERATE_ANGLE {
            return Err(Error::DegenerateEndpoints);
        }
        let phi_alpha = if alpha.norm() <= f64::EPSILON { 0.0 } else { alpha.arg() };
        let phi = beta.arg() - phi_alpha + FRAC_PI_2;
        let half = 0.5 * e0;
        let diag = Complex64::new(-half * phi_alpha / x, 0.0);
        let off = Complex64::from_polar(half, -phi);
        let h = ComplexMat2::new(diag, off, off.conj(), diag);
        let t_min = 2.0 * self.hbar * x / e0;
        self.finish(h, a, b, t_min, Route::TimeMinimization)
    }

    /// [`Self::synthesize_min_time`] for an arbitrary initial state: the basis
    /// is rotated so that `a` becomes `(1, 0)` and the result is rotated back.
    pub fn synthesize_min_time_from(
        &self,
        a: &QuantumState,
        b: &QuantumState,
        e0: f64,
    ) -> Result<SynthesisResult> {
        let v = basis_alignment(a);
        let aligned = self.synthesize_min_time(&QuantumState::ground(), &b.evolve(&v)?, e0)?;
        let h = v.adjoint() * *aligned.hamiltonian.matrix() * v;
        self.finish(h, a, b, aligned.t_min, Route::TimeMinimization)
    }

    /// Traceless Hamiltonian with energy uncertainty `e` in `a` that carries
    /// `a` to `b` along the geodesic in `t_min = hbar theta_AB / (2E)`.
    pub fn synthesize_max_uncertainty(
        &self,
        a: &QuantumState,
        b: &QuantumState,
        e: f64,
    ) -> Result<SynthesisResult> {
        positive("e", e)?;
        let theta = fubini_study_angle(a, b);
        if theta <= DEGENERATE_ANGLE {
            return Err(Error::DegenerateEndpoints);
        }
        let h = if a.inner(b).norm() > ORTHOGONAL_OVERLAP {
            hamiltonian_from_endpoints(a, b, e)?
        } else {
            hamiltonian_from_equatorial_pair(a, b, e)?
        };
        let t_min = self.hbar * theta / (2.0 * e);
        self.finish(h, a, b, t_min, Route::UncertaintyMaximization)
    }

    fn finish(
        &self,
        h: ComplexMat2,
        a: &QuantumState,
        b: &QuantumState,
        t_min: f64,
        route: Route,
    ) -> Result<SynthesisResult> {
        let hamiltonian = Hamiltonian2::new(h)?;
        let endpoint_fidelity = self.gate(&h, a, b, t_min)?;
        Ok(SynthesisResult {
            hamiltonian,
            t_min,
            delta_e: energy_uncertainty(&hamiltonian, a.amplitudes())?,
            route,
            initial: *a,
            target: *b,
            theta_ab: fubini_study_angle(a, b),
            endpoint_fidelity,
        })
    }

    /// Point on the geodesic from `a` to `b` traversed at energy uncertainty
    /// `e`, evaluated as a combination of `a` and `b`.
    ///
    /// `b` is first given the phase for which `<a|b> = cos(theta/2) e^{-i theta/2}`.
    pub fn geodesic_state(
        &self,
        a: &QuantumState,
        b: &QuantumState,
        e: f64,
        t: f64,
    ) -> Result<QuantumState> {
        positive("e", e)?;
        let overlap = a.inner(b);
        let c = overlap.norm();
        if c <= ORTHOGONAL_OVERLAP {
            return Err(Error::OrthogonalEndpoints);
        }
        let theta = fubini_study_angle(a, b);
        if theta <= DEGENERATE_ANGLE {
            return Err(Error::DegenerateEndpoints);
        }
        let t_min = self.hbar * theta / (2.0 * e);
        if !(0.0..=t_min * (1.0 + 4.0 * f64::EPSILON)).contains(&t) {
            return Err(Error::TimeOutOfRange { t, t_min });
        }
        let half = 0.5 * theta;
        let b_conv = b
            .amplitudes()
            .scale(Complex64::from_polar(1.0, -(overlap.arg() + half)));
        let (s_t, c_t) = (e * t / self.hbar).sin_cos();
        let (s_h, c_h) = half.sin_cos();
        let ka = Complex64::new(c_t - c_h / s_h * s_t, 0.0);
        let kb = Complex64::from_polar(s_t / s_h, half);
        QuantumState::normalize(a.amplitudes().scale(ka) + b_conv.scale(kb))
    }

    /// `n` equally spaced samples of the geodesic, endpoints included.
    pub fn geodesic_trajectory(
        &self,
        a: &QuantumState,
        b: &QuantumState,
        e: f64,
        n: usize,
    ) -> Result<Vec<(f64, QuantumState)>> {
        if n < 2 {
            return Err(Error::TooFewSamples { got: n, need: 2 });
        }
        let t_min = self.hbar * fubini_study_angle(a, b) / (2.0 * e);
        (0..n)
            .map(|k| {
                let t = if k == n - 1 { t_min } else { t_min * k as f64 / (n - 1) as f64 };
                Ok((t, self.geodesic_state(a, b, e, t)?))
            })
            .collect()
    }
}

/// `iE cot(theta/2) [ |b><a| / <a|b> - |a><b| / <b|a> ]`, for non-orthogonal
/// endpoints.
pub fn hamiltonian_from_endpoints(a: &QuantumState, b: &QuantumState, e: f64) -> Result<ComplexMat2> {
    positive("e", e)?;
    let ab = a.inner(b);
    if ab.norm() <= ORTHOGONAL_OVERLAP {
        return Err(Error::OrthogonalEndpoints);
    }
    let theta = fubini_study_angle(a, b);
    if theta <= DEGENERATE_ANGLE {
        return Err(Error::DegenerateEndpoints);
    }
    let cot = 1.0 / (0.5 * theta).tan();
    let (va, vb) = (a.amplitudes(), b.amplitudes());
    let bracket = vb.outer(va).scale(ab.inv()) - va.outer(vb).scale(ab.conj().inv());
    Ok(hermitize(bracket.scale(I * (e * cot))))
}

/// `iE / sin(theta/2) [ |b~><a| - |a><b~| ]` with `b~ = b e^{-i arg<a|b>}`.
/// Regular at orthogonality.
pub fn hamiltonian_from_equatorial_pair(
    a: &QuantumState,
    b: &QuantumState,
    e: f64,
) -> Result<ComplexMat2> {
    positive("e", e)?;
    let theta = fubini_study_angle(a, b);
    if theta <= DEGENERATE_ANGLE {
        return Err(Error::DegenerateEndpoints);
    }
    let ab = a.inner(b);
    let gamma = if ab.norm() == 0.0 { 0.0 } else { ab.arg() };
    let b_tilde = b.amplitudes().scale(Complex64::from_polar(1.0, -gamma));
    let va = a.amplitudes();
    let bracket = b_tilde.outer(va) - va.outer(&b_tilde);
    Ok(hermitize(bracket.scale(I * (e / (0.5 * theta).sin()))))
}

/// Removes rounding-level anti-Hermitian noise.
fn hermitize(m: ComplexMat2) -> ComplexMat2 {
    (m + m.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// `Delta E = sqrt(<H^2> - <H>^2)` in the (not necessarily normalized) state `s`,
/// evaluated as `||(H - <H>) s|| / ||s||`.
pub fn energy_uncertainty(h: &Hamiltonian2, s: &ComplexVec2) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let n2 = s.norm_sqr();
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let m = h.matrix();
    let hs = m.apply(s);
    let mean = s.inner(&hs).re / n2;
    let centered = hs - s.scale(Complex64::new(mean, 0.0));
    Ok((centered.norm_sqr() / n2).sqrt())
}

/// Geometric efficiency `s0 / s` of a sampled trajectory, where `s` is the sum
/// of Fubini-Study angles of consecutive samples.
pub fn efficiency(trajectory: &[QuantumState]) -> Result<EfficiencyReport> {
    if trajectory.len() < 2 {
        return Err(Error::TooFewSamples {
            got: trajectory.len(),
            need: 2,
        });
    }
    let mut s = 0.0;
    for (index, pair) in trajectory.windows(2).enumerate() {
        let step = fubini_study_angle(&pair[0], &pair[1]);
        if step <= f64::EPSILON * 0.5 {
            return Err(Error::RepeatedSample { index });
        }
        s += step;
    }
    let s0 = fubini_study_angle(&trajectory[0], &trajectory[trajectory.len() - 1]);
    // s0 <= s holds exactly; the clamp only absorbs summation rounding.
    Ok(EfficiencyReport {
        s0,
        s,
        eta_qm: (s0 / s).min(1.0),
    })
}

/// Hermitian `[[h11, h12], [conj(h12), h22]]`.
pub fn hamiltonian_from_entries(h11: f64, h22: f64, h12: Complex64) -> Result<Hamiltonian2> {
    Hamiltonian2::new(ComplexMat2::new(
        Complex64::new(h11, 0.0),
        h12,
        h12.conj(),
        Complex64::new(h22, 0.0),
    ))
}
