//! Pure two-level states, their Bloch-sphere angles and the Fubini-Study
//! distance between them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMat2, ComplexVec2, Vec3, STRUCTURE_TOL};

/// A normalized state `c0 |0> + c1 |1>`. Global phase is kept as given.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexVec2", into = "ComplexVec2")]
pub struct QuantumState(ComplexVec2);

impl QuantumState {
    /// Accepts amplitudes whose squared norm is 1 within 1e-12.
    pub fn new(amplitudes: ComplexVec2) -> Result<Self> {
        if !amplitudes.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        let norm_sqr = amplitudes.norm_sqr();
        if (norm_sqr - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::Unnormalized { norm_sqr });
        }
        Ok(Self(amplitudes))
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalize(amplitudes: ComplexVec2) -> Result<Self> {
        if !amplitudes.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        let n = amplitudes.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self(amplitudes.scale(Complex64::new(1.0 / n, 0.0))))
    }

    pub fn from_components(c0: Complex64, c1: Complex64) -> Result<Self> {
        Self::new(ComplexVec2::new(c0, c1))
    }

    /// `|0>`.
    pub fn ground() -> Self {
        Self(ComplexVec2::real(1.0, 0.0))
    }

    /// `|1>`.
    pub fn excited() -> Self {
        Self(ComplexVec2::real(0.0, 1.0))
    }

    pub fn amplitudes(&self) -> &ComplexVec2 {
        &self.0
    }

    pub fn c0(&self) -> Complex64 {
        self.0.c0()
    }

    pub fn c1(&self) -> Complex64 {
        self.0.c1()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.inner(&other.0)
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        Self(self.0.scale(Complex64::from_polar(1.0, phase)))
    }

    /// The orthogonal state `(-conj(c1), conj(c0))`.
    pub fn orthogonal(&self) -> Self {
        Self(ComplexVec2::new(-self.c1().conj(), self.c0().conj()))
    }

    /// Applies a unitary and renormalizes away rounding drift.
    pub fn evolve(&self, u: &ComplexMat2) -> Result<Self> {
        Self::normalize(u.apply(&self.0))
    }

    /// Bloch angles, with `phi` canonicalized to 0 at the poles.
    pub fn angles(&self) -> BlochAngles {
        let r0 = self.c0().norm();
        let r1 = self.c1().norm();
        let theta = 2.0 * r1.atan2(r0);
        let phi = if r0 == 0.0 || r1 == 0.0 {
            0.0
        } else {
            (self.c1().arg() - self.c0().arg()).rem_euclid(TAU)
        };
        let phi = if phi >= TAU { 0.0 } else { phi };
        BlochAngles { theta, phi }
    }
}

impl TryFrom<ComplexVec2> for QuantumState {
    type Error = Error;
    fn try_from(v: ComplexVec2) -> Result<Self> {
        Self::new(v)
    }
}

impl From<QuantumState> for ComplexVec2 {
    fn from(s: QuantumState) -> Self {
        s.0
    }
}

/// Polar angle `theta` in `[0, pi]` and azimuth `phi` in `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::AngleOutOfRange {
                name: "theta",
                value: theta,
                range: "[0, pi]",
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::AngleOutOfRange {
                name: "phi",
                value: phi,
                range: "[0, 2pi)",
            });
        }
        let phi = if theta == 0.0 || theta == PI { 0.0 } else { phi };
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `cos(theta/2) |0> + e^{i phi} sin(theta/2) |1>`.
pub fn state_from_angles(a: BlochAngles) -> QuantumState {
    let (s, c) = (0.5 * a.theta).sin_cos();
    QuantumState(ComplexVec2::new(
        Complex64::new(c, 0.0),
        Complex64::from_polar(s, a.phi),
    ))
}

/// `<psi| sigma |psi>`, a unit vector.
pub fn bloch_vector(s: &QuantumState) -> Vec3 {
    let (c0, c1) = (s.c0(), s.c1());
    let cross = c0.conj() * c1;
    [
        2.0 * cross.re,
        2.0 * cross.im,
        c0.norm_sqr() - c1.norm_sqr(),
    ]
}

/// Geodesic angle `theta_AB = 2 arccos |<a|b>|` in `[0, pi]`, evaluated as
/// `2 atan2(|a ^ b|, |<a|b>|)` to stay accurate near 0 and pi.
pub fn fubini_study_angle(a: &QuantumState, b: &QuantumState) -> f64 {
    let overlap = a.inner(b).norm();
    let wedge = a.amplitudes().wedge(b.amplitudes()).norm();
    2.0 * wedge.atan2(overlap)
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> f64 {
    a.inner(b).norm_sqr().min(1.0)
}

/// True when `a` and `b` describe the same ray: `1 - |<a|b>| <= tol`.
pub fn equal_up_to_phase(a: &QuantumState, b: &QuantumState, tol: f64) -> bool {
    1.0 - a.inner(b).norm() <= tol
}
