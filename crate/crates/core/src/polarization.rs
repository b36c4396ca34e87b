//! Polarization ellipse, Stokes parameters, Poincaré sphere and the
//! coherency matrix of a light beam.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMat2, ComplexVec2, Vec3, I, ZERO};

/// Slack allowed on the partial-polarization and Schwarz bounds, relative to
/// the squared intensity scale.
pub const BOUND_TOL: f64 = 1e-9;

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// A monochromatic plane wave `E_j(t) = E0j cos(omega t + delta_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldAmplitudes {
    e0x: f64,
    e0y: f64,
    delta_x: f64,
    delta_y: f64,
    omega: f64,
}

impl FieldAmplitudes {
    pub fn new(e0x: f64, e0y: f64, delta_x: f64, delta_y: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("e0x", e0x), ("e0y", e0y), ("delta_x", delta_x), ("delta_y", delta_y)] {
            finite(name, v)?;
        }
        if e0x < 0.0 || e0y < 0.0 {
            return Err(Error::InvalidParameter {
                name: if e0x < 0.0 { "e0x" } else { "e0y" },
                value: e0x.min(e0y),
                reason: "amplitudes must be nonnegative",
            });
        }
        if e0x == 0.0 && e0y == 0.0 {
            return Err(Error::ZeroIntensity);
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "must be positive and finite",
            });
        }
        Ok(Self {
            e0x,
            e0y,
            delta_x,
            delta_y,
            omega,
        })
    }

    pub fn e0x(&self) -> f64 {
        self.e0x
    }

    pub fn e0y(&self) -> f64 {
        self.e0y
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Relative phase `delta = delta_x - delta_y`.
    pub fn delta(&self) -> f64 {
        self.delta_x - self.delta_y
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Instantaneous real field `(E_x(t), E_y(t))`.
    pub fn field_at(&self, t: f64) -> (f64, f64) {
        (
            self.e0x * (self.omega * t + self.delta_x).cos(),
            self.e0y * (self.omega * t + self.delta_y).cos(),
        )
    }

    /// Complex amplitude `(E0x e^{i delta_x}, E0y e^{i delta_y})`.
    pub fn jones_vector(&self) -> ComplexVec2 {
        ComplexVec2::new(
            Complex64::from_polar(self.e0x, self.delta_x),
            Complex64::from_polar(self.e0y, self.delta_y),
        )
    }
}

/// Stokes parameters `(S0, S1, S2, S3)` with `S1^2 + S2^2 + S3^2 <= S0^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StokesVector {
    s0: f64,
    s1: f64,
    s2: f64,
    s3: f64,
}

impl StokesVector {
    pub fn new(s0: f64, s1: f64, s2: f64, s3: f64) -> Result<Self> {
        if ![s0, s1, s2, s3].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidStokes("non-finite component".into()));
        }
        if !(s0 > 0.0) {
            return Err(Error::InvalidStokes(format!("S0 = {s0} must be positive")));
        }
        let excess = s1 * s1 + s2 * s2 + s3 * s3 - s0 * s0;
        if excess > BOUND_TOL * s0 * s0.max(1.0) {
            return Err(Error::InvalidStokes(format!(
                "S1^2 + S2^2 + S3^2 exceeds S0^2 by {excess:e}"
            )));
        }
        Ok(Self { s0, s1, s2, s3 })
    }

    pub fn from_array(s: [f64; 4]) -> Result<Self> {
        Self::new(s[0], s[1], s[2], s[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.s0, self.s1, self.s2, self.s3]
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn s3(&self) -> f64 {
        self.s3
    }

    /// `sqrt(S1^2 + S2^2 + S3^2)`.
    pub fn polarized_intensity(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }

    pub fn degree_of_polarization(&self) -> f64 {
        (self.polarized_intensity() / self.s0).min(1.0)
    }

    /// `(S1, S2, S3) / S0`.
    pub fn reduced(&self) -> Vec3 {
        [self.s1 / self.s0, self.s2 / self.s0, self.s3 / self.s0]
    }

    /// `S0^2 - S1^2 - S2^2 - S3^2`, zero for fully polarized light.
    pub fn unpolarized_excess(&self) -> f64 {
        self.s0 * self.s0 - self.polarized_intensity().powi(2)
    }
}

/// Hermitian positive-semidefinite `[[Jxx, Jxy], [conj(Jxy), Jyy]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoherencyMatrix {
    jxx: f64,
    jyy: f64,
    jxy: Complex64,
}

impl CoherencyMatrix {
    pub fn new(jxx: f64, jyy: f64, jxy: Complex64) -> Result<Self> {
        if ![jxx, jyy, jxy.re, jxy.im].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidCoherency("non-finite entry".into()));
        }
        let scale = (jxx.abs() + jyy.abs()).max(1.0);
        if jxx < -BOUND_TOL * scale || jyy < -BOUND_TOL * scale {
            return Err(Error::InvalidCoherency(format!(
                "negative intensity: Jxx = {jxx}, Jyy = {jyy}"
            )));
        }
        let det = jxx * jyy - jxy.norm_sqr();
        if det < -BOUND_TOL * scale * scale {
            return Err(Error::InvalidCoherency(format!("det(J) = {det:e} < 0")));
        }
        if jxy.norm() > (jxx.max(0.0) * jyy.max(0.0)).sqrt() + BOUND_TOL * scale {
            return Err(Error::InvalidCoherency("|Jxy| exceeds sqrt(Jxx Jyy)".into()));
        }
        Ok(Self { jxx, jyy, jxy })
    }

    pub fn from_real(jxx: f64, jyy: f64, jxy: f64) -> Result<Self> {
        Self::new(jxx, jyy, Complex64::new(jxy, 0.0))
    }

    /// Reads the upper triangle; the matrix must be Hermitian.
    pub fn from_matrix(m: &ComplexMat2) -> Result<Self> {
        m.check_hermitian()?;
        let jxy = 0.5 * (m.get(0, 1) + m.get(1, 0).conj());
        Self::new(m.get(0, 0).re, m.get(1, 1).re, jxy)
    }

    /// `v v^dagger` for a Jones vector `v = (E_x, E_y)`.
    pub fn from_jones_vector(v: &ComplexVec2) -> Result<Self> {
        Self::new(v.c0().norm_sqr(), v.c1().norm_sqr(), v.c0() * v.c1().conj())
    }

    /// Partially polarized beam of total intensity `i_tot` whose polarized
    /// part has ellipse angles `(beta, chi)` and weight `p`.
    pub fn from_polarization(angles: EllipseAngles, p: f64, i_tot: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "degree of polarization lies in [0, 1]",
            });
        }
        let s = poincare_from_angles(angles, i_tot)?;
        let pol = StokesVector::new(s.s0, p * s.s1, p * s.s2, p * s.s3)?;
        Ok(coherency_from_stokes(&pol))
    }

    pub fn jxx(&self) -> f64 {
        self.jxx
    }

    pub fn jyy(&self) -> f64 {
        self.jyy
    }

    pub fn jxy(&self) -> Complex64 {
        self.jxy
    }

    pub fn jyx(&self) -> Complex64 {
        self.jxy.conj()
    }

    pub fn trace(&self) -> f64 {
        self.jxx + self.jyy
    }

    pub fn det(&self) -> f64 {
        self.jxx * self.jyy - self.jxy.norm_sqr()
    }

    pub fn to_matrix(&self) -> ComplexMat2 {
        ComplexMat2::new(
            Complex64::new(self.jxx, 0.0),
            self.jxy,
            self.jxy.conj(),
            Complex64::new(self.jyy, 0.0),
        )
    }

    /// `I_pol^2 = (Jxx - Jyy)^2 + 4 Jxy Jyx`, invariant under rotations.
    pub fn i_pol_sq(&self) -> f64 {
        (self.jxx - self.jyy).powi(2) + 4.0 * self.jxy.norm_sqr()
    }

    /// Components in the frame rotated by `phi` about the propagation axis:
    /// `J' = R(phi) J R(-phi)` with `R(phi) = [[cos, sin], [-sin, cos]]`.
    pub fn rotated(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let r = ComplexMat2::from_real([[c, s], [-s, c]]);
        let m = r * self.to_matrix() * r.transpose();
        Self {
            jxx: m.get(0, 0).re,
            jyy: m.get(1, 1).re,
            jxy: 0.5 * (m.get(0, 1) + m.get(1, 0).conj()),
        }
    }

    /// Complex degree of coherence `Jxy / sqrt(Jxx Jyy)`, zero when `Jxy = 0`.
    pub fn degree_of_coherence(&self) -> Complex64 {
        if self.jxy == ZERO {
            return ZERO;
        }
        let denom = (self.jxx * self.jyy).sqrt();
        let j = self.jxy / denom;
        if j.norm() > 1.0 {
            j / j.norm()
        } else {
            j
        }
    }
}

/// Ellipticity `beta` in `[-pi/4, pi/4]` and orientation `chi` in `[0, pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipseAngles {
    beta: f64,
    chi: f64,
}

impl EllipseAngles {
    pub fn new(beta: f64, chi: f64) -> Result<Self> {
        if !(-FRAC_PI_4..=FRAC_PI_4).contains(&beta) {
            return Err(Error::AngleOutOfRange {
                name: "beta",
                value: beta,
                range: "[-pi/4, pi/4]",
            });
        }
        if !(0.0..PI).contains(&chi) {
            return Err(Error::AngleOutOfRange {
                name: "chi",
                value: chi,
                range: "[0, pi)",
            });
        }
        Ok(Self { beta, chi })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }
}

/// Intensities, degree of polarization and degree of coherence of a beam.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarizationReport {
    pub p: f64,
    pub i_tot: f64,
    pub i_pol: f64,
    pub j_abs: f64,
    pub beta_xy: f64,
}

/// Natural plus fully polarized split of a coherency matrix.
///
/// In the principal frame `T(chi) J T(chi)` equals
/// `[[A^2 + D^2, -i AB], [i AB, B^2 + D^2]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WienerDecomposition {
    pub d_sq: f64,
    pub a_sq: f64,
    pub b_sq: f64,
    pub ab: f64,
    pub chi: f64,
    /// `max |T J T - J_tot|` over entries.
    pub reconstruction_residual: f64,
}

impl WienerDecomposition {
    pub fn i_pol(&self) -> f64 {
        self.a_sq + self.b_sq
    }

    /// `[[D^2, 0], [0, D^2]]`.
    pub fn natural(&self) -> ComplexMat2 {
        ComplexMat2::identity().scale(Complex64::new(self.d_sq, 0.0))
    }

    /// `[[A^2, -i AB], [i AB, B^2]]`, principal frame.
    pub fn polarized(&self) -> ComplexMat2 {
        ComplexMat2::new(
            Complex64::new(self.a_sq, 0.0),
            -I * self.ab,
            I * self.ab,
            Complex64::new(self.b_sq, 0.0),
        )
    }

    /// `J_natural + J_pol`.
    pub fn total(&self) -> ComplexMat2 {
        self.natural() + self.polarized()
    }
}

/// A polarization state on the circular basis `(e_RC, e_LC)` together with
/// its components on the linear basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarizationState {
    pub circular: ComplexVec2,
    pub linear: ComplexVec2,
}

impl PolarizationState {
    /// `<e, sigma e>` evaluated on the circular components.
    pub fn poincare_vector(&self) -> Vec3 {
        let (u, v) = (self.circular.c0(), self.circular.c1());
        let cross = u.conj() * v;
        [2.0 * cross.re, 2.0 * cross.im, u.norm_sqr() - v.norm_sqr()]
    }
}

/// Time-averaged Stokes parameters of a monochromatic wave.
pub fn stokes_from_fields(f: &FieldAmplitudes) -> StokesVector {
    let (x, y) = (f.e0x, f.e0y);
    let (sd, cd) = f.delta().sin_cos();
    StokesVector {
        s0: x * x + y * y,
        s1: x * x - y * y,
        s2: 2.0 * x * y * cd,
        s3: 2.0 * x * y * sd,
    }
}

/// `|Ex^2/E0x^2 + Ey^2/E0y^2 - 2 Ex Ey cos(delta)/(E0x E0y) - sin^2(delta)|`
/// at time `t`. Needs both amplitudes nonzero.
pub fn verify_ellipse_point(f: &FieldAmplitudes, t: f64) -> Result<f64> {
    if f.e0x == 0.0 || f.e0y == 0.0 {
        return Err(Error::InvalidParameter {
            name: if f.e0x == 0.0 { "e0x" } else { "e0y" },
            value: 0.0,
            reason: "the ellipse equation divides by both amplitudes",
        });
    }
    let (ex, ey) = f.field_at(t);
    let (u, v) = (ex / f.e0x, ey / f.e0y);
    let (sd, cd) = f.delta().sin_cos();
    Ok((u * u + v * v - 2.0 * u * v * cd - sd * sd).abs())
}

/// Fully polarized Stokes vector at latitude `2 beta` and longitude `2 chi`.
pub fn poincare_from_angles(a: EllipseAngles, s0: f64) -> Result<StokesVector> {
    if !(s0.is_finite() && s0 > 0.0) {
        return Err(Error::InvalidStokes(format!("S0 = {s0} must be positive")));
    }
    let (s2b, c2b) = (2.0 * a.beta).sin_cos();
    let (s2c, c2c) = (2.0 * a.chi).sin_cos();
    Ok(StokesVector {
        s0,
        s1: s0 * c2b * c2c,
        s2: s0 * c2b * s2c,
        s3: s0 * s2b,
    })
}

/// `Jxx = (S0+S1)/2`, `Jyy = (S0-S1)/2`, `Jxy = (S2 + i S3)/2`.
pub fn coherency_from_stokes(s: &StokesVector) -> CoherencyMatrix {
    CoherencyMatrix {
        jxx: 0.5 * (s.s0 + s.s1),
        jyy: 0.5 * (s.s0 - s.s1),
        jxy: Complex64::new(0.5 * s.s2, 0.5 * s.s3),
    }
}

/// `S0 = Jxx + Jyy`, `S1 = Jxx - Jyy`, `S2 = Jxy + Jyx`, `S3 = i(Jyx - Jxy)`.
pub fn stokes_from_coherency(j: &CoherencyMatrix) -> Result<StokesVector> {
    StokesVector::new(
        j.jxx + j.jyy,
        j.jxx - j.jyy,
        2.0 * j.jxy.re,
        2.0 * j.jxy.im,
    )
}

/// `J = (1/2) sum_i S_i sigma_i` with `sigma = (I, sigma_z, sigma_x, -sigma_y)`.
pub fn coherency_from_pauli_expansion(s: &StokesVector) -> ComplexMat2 {
    let half = |k: f64| Complex64::new(0.5 * k, 0.0);
    ComplexMat2::identity().scale(half(s.s0))
        + ComplexMat2::pauli_z().scale(half(s.s1))
        + ComplexMat2::pauli_x().scale(half(s.s2))
        - ComplexMat2::pauli_y().scale(half(s.s3))
}

/// `P = sqrt(1 - 4 det J / tr(J)^2)` with the intensities and the complex
/// degree of coherence in the current frame.
pub fn degree_of_polarization(j: &CoherencyMatrix) -> Result<PolarizationReport> {
    let i_tot = j.trace();
    if !(i_tot > 0.0) {
        return Err(Error::ZeroIntensity);
    }
    // sqrt((Jxx - Jyy)^2 + 4|Jxy|^2) / tr avoids cancellation in 1 - 4 det / tr^2.
    let p = (j.i_pol_sq().sqrt() / i_tot).min(1.0);
    let coherence = j.degree_of_coherence();
    Ok(PolarizationReport {
        p,
        i_tot,
        i_pol: p * i_tot,
        j_abs: coherence.norm(),
        beta_xy: if coherence == ZERO { 0.0 } else { coherence.arg() },
    })
}

/// Orientation `chi` in `[0, pi)` from `tan(2 chi) = (Jxy + Jyx) / (Jxx - Jyy)`;
/// 0 when both arguments vanish.
pub fn orientation_angle(j: &CoherencyMatrix) -> f64 {
    let y = 2.0 * j.jxy.re;
    let x = j.jxx - j.jyy;
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    let chi = 0.5 * y.atan2(x);
    let chi = if chi < 0.0 { chi + PI } else { chi };
    if chi >= PI {
        0.0
    } else {
        chi
    }
}

/// `T(chi) = [[cos, sin], [sin, -cos]]`, its own inverse.
pub fn principal_transform(chi: f64) -> ComplexMat2 {
    let (s, c) = chi.sin_cos();
    ComplexMat2::from_real([[c, s], [s, -c]])
}

/// Splits `J` into natural light `D^2 I` and a fully polarized part, and
/// returns the orientation angle of the polarized part's ellipse.
pub fn wiener_decompose(j: &CoherencyMatrix) -> WienerDecomposition {
    let chi = orientation_angle(j);
    let t = principal_transform(chi);
    let g = t * j.to_matrix() * t;
    let x = g.get(0, 0).re;
    let y = g.get(1, 1).re;
    // off-diagonal of T J T is i * delta with delta = -Im(Jxy)
    let ab = -g.get(0, 1).im;
    let root = ((x - y).powi(2) + 4.0 * ab * ab).sqrt();
    let d_sq = (0.5 * ((x + y) - root)).max(0.0);
    let mut w = WienerDecomposition {
        d_sq,
        a_sq: (x - d_sq).max(0.0),
        b_sq: (y - d_sq).max(0.0),
        ab,
        chi,
        reconstruction_residual: 0.0,
    };
    w.reconstruction_residual = g.max_abs_diff(&w.total());
    w
}

/// `|j|(beta, chi; P) = P sqrt[(1 - c^2) / (1 - P^2 c^2)]`, `c = cos 2beta cos 2chi`.
///
/// At `P = 1, c^2 = 1` the expression is 0/0; the value `P` is returned,
/// the limit along fully polarized states.
pub fn partial_coherence_profile(beta: f64, chi: f64, p: f64) -> Result<f64> {
    EllipseAngles::new(beta, chi)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "degree of polarization lies in [0, 1]",
        });
    }
    let c2 = ((2.0 * beta).cos() * (2.0 * chi).cos()).powi(2);
    let num = 1.0 - c2;
    let den = 1.0 - p * p * c2;
    if den <= 0.0 {
        return Ok(p);
    }
    Ok(p * (num / den).max(0.0).sqrt())
}

/// `e(beta, chi) = (cos b + sin b)/sqrt2 e_RC + e^{2 i chi} (cos b - sin b)/sqrt2 e_LC`,
/// also expanded on the linear basis through
/// `e_RC = (e_HL - i e_VL)/sqrt2`, `e_LC = (e_HL + i e_VL)/sqrt2`.
pub fn polarization_state_from_angles(a: EllipseAngles) -> PolarizationState {
    let (sb, cb) = a.beta.sin_cos();
    let u = Complex64::new((cb + sb) * FRAC_1_SQRT_2, 0.0);
    let v = Complex64::from_polar((cb - sb) * FRAC_1_SQRT_2, 2.0 * a.chi);
    let linear = ComplexVec2::new((u + v) * FRAC_1_SQRT_2, (v - u) * I * FRAC_1_SQRT_2);
    PolarizationState {
        circular: ComplexVec2::new(u, v),
        linear,
    }
}
