//! Small fixed-size linear algebra and deterministic numerical oracles.
//!
//! Everything here is a plain value type: complex 2-vectors, complex 2x2 and
//! 4x4 matrices, real 4x4 matrices. The closed-form SU(2) exponential works
//! from the Pauli decomposition `H = a0 I + a . sigma`, so no series truncation
//! is involved.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for closed-form identities.
pub const CLOSED_FORM_TOL: f64 = 1e-10;
/// Absolute tolerance for quadrature and grid oracles.
pub const ORACLE_TOL: f64 = 1e-6;
/// Tolerance for normalization, Hermiticity and unitarity checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

pub type Vec3 = [f64; 3];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// A pair of complex amplitudes `(c0, c1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexVec2(pub [Complex64; 2]);

impl ComplexVec2 {
    pub const fn new(c0: Complex64, c1: Complex64) -> Self {
        Self([c0, c1])
    }

    pub fn real(x: f64, y: f64) -> Self {
        Self([Complex64::new(x, 0.0), Complex64::new(y, 0.0)])
    }

    pub fn c0(&self) -> Complex64 {
        self.0[0]
    }

    pub fn c1(&self) -> Complex64 {
        self.0[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    /// `c0 * d1 - c1 * d0`; for 2-vectors `|<a|b>|^2 + |a ^ b|^2 = |a|^2 |b|^2`.
    pub fn wedge(&self, other: &Self) -> Complex64 {
        self.0[0] * other.0[1] - self.0[1] * other.0[0]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self([self.0[0] * k, self.0[1] * k])
    }

    pub fn conj(&self) -> Self {
        Self([self.0[0].conj(), self.0[1].conj()])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, other: &Self) -> ComplexMat2 {
        let mut m = [[ZERO; 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.0[r] * other.0[c].conj();
            }
        }
        ComplexMat2(m)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0[0] - other.0[0])
            .norm()
            .max((self.0[1] - other.0[1]).norm())
    }
}

impl Add for ComplexVec2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl Sub for ComplexVec2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

/// Complex 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMat2(pub [[Complex64; 2]; 2]);

impl ComplexMat2 {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self([[m00, m01], [m10, m11]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Self([
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ])
    }

    pub const fn zero() -> Self {
        Self([[ZERO; 2]; 2])
    }

    pub const fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn pauli_x() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self([[ONE, ZERO], [ZERO, -ONE]])
    }

    /// `a0 I + a . (sigma_x, sigma_y, sigma_z)`.
    pub fn from_pauli(a0: f64, a: Vec3) -> Self {
        Self([
            [Complex64::new(a0 + a[2], 0.0), Complex64::new(a[0], -a[1])],
            [Complex64::new(a[0], a[1]), Complex64::new(a0 - a[2], 0.0)],
        ])
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let m = &self.0;
        Self([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: &ComplexVec2) -> ComplexVec2 {
        let m = &self.0;
        ComplexVec2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    /// `<u| self |v>`.
    pub fn sandwich(&self, u: &ComplexVec2, v: &ComplexVec2) -> Complex64 {
        u.inner(&self.apply(v))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, c| acc.max(c.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `max |M - M^dagger|` over entries.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |M^dagger M - I|` over entries.
    pub fn unitarity_residual(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn check_hermitian(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        let residual = self.hermiticity_residual();
        if residual > STRUCTURE_TOL * self.max_abs().max(1.0) {
            return Err(Error::NonHermitian { residual });
        }
        Ok(())
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        let residual = self.unitarity_residual();
        if residual > tol {
            return Err(Error::NotUnitary { residual });
        }
        Ok(())
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Self) -> ComplexMat4 {
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.0[r / 2][c / 2] * other.0[r % 2][c % 2];
            }
        }
        ComplexMat4(m)
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self.0;
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry += rhs.0[r][c];
            }
        }
        Self(m)
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self.0;
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry -= rhs.0[r][c];
            }
        }
        Self(m)
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Self([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Complex 4x4 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMat4(pub [[Complex64; 4]; 4]);

impl ComplexMat4 {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = ONE;
        }
        Self(m)
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.0[c][r].conj();
            }
        }
        Self(m)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|e| *e *= k);
        Self(m)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Splits into real part and the largest absolute imaginary part.
    pub fn split_real(&self) -> (RealMat4, f64) {
        let mut re = [[0.0; 4]; 4];
        let mut residue = 0.0_f64;
        for (r, row) in re.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.0[r][c].re;
                residue = residue.max(self.0[r][c].im.abs());
            }
        }
        (RealMat4(re), residue)
    }
}

impl Mul for ComplexMat4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        Self(m)
    }
}

/// Real 4x4 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMat4(pub [[f64; 4]; 4]);

impl RealMat4 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        Self(m)
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = d[k];
        }
        Self(m)
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.0[r][c]
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.0[c][r];
            }
        }
        Self(m)
    }

    pub fn apply(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|k| self.0[r][k] * v[k]).sum();
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// The lower-right 3x3 block.
    pub fn block3(&self) -> [[f64; 3]; 3] {
        let mut b = [[0.0; 3]; 3];
        for (r, row) in b.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.0[r + 1][c + 1];
            }
        }
        b
    }
}

impl Mul for RealMat4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        Self(m)
    }
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Pauli components of a Hermitian 2x2 matrix: `H = a0 I + a . sigma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliDecomposition {
    pub a0: f64,
    pub a: Vec3,
}

impl PauliDecomposition {
    pub fn of(h: &ComplexMat2) -> Self {
        let m = &h.0;
        // Off-diagonals averaged so tiny anti-Hermitian noise does not bias the axis.
        let off = (m[1][0] + m[0][1].conj()) * 0.5;
        Self {
            a0: 0.5 * (m[0][0].re + m[1][1].re),
            a: [off.re, off.im, 0.5 * (m[0][0].re - m[1][1].re)],
        }
    }

    pub fn strength(&self) -> f64 {
        norm3(&self.a)
    }
}

/// `exp(-i H tau)` for Hermitian `H`, with `tau = t / hbar`.
///
/// Closed form: `e^{-i a0 tau} [cos(|a| tau) I - i sin(|a| tau) (a/|a|) . sigma]`.
pub fn matrix_exponential_su2(h: &ComplexMat2, tau: f64) -> Result<ComplexMat2> {
    h.check_hermitian()?;
    if !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: tau,
            reason: "must be finite",
        });
    }
    let p = PauliDecomposition::of(h);
    let r = p.strength();
    let phase = Complex64::from_polar(1.0, -p.a0 * tau);
    if r == 0.0 {
        return Ok(ComplexMat2::identity().scale(phase));
    }
    let (s, c) = (r * tau).sin_cos();
    let n = [p.a[0] / r, p.a[1] / r, p.a[2] / r];
    // -i sin * (n . sigma)
    let u = ComplexMat2([
        [Complex64::new(c, -s * n[2]), Complex64::new(-s * n[1], -s * n[0])],
        [Complex64::new(s * n[1], -s * n[0]), Complex64::new(c, s * n[2])],
    ]);
    Ok(u.scale(phase))
}

/// Spectral data of a Hermitian 2x2 matrix, eigenvalues ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianEigen {
    pub values: [f64; 2],
    pub vectors: [ComplexVec2; 2],
}

/// Unit spinor whose Bloch vector is the unit vector `n`.
pub fn spinor_along(n: &Vec3) -> ComplexVec2 {
    let cos_half = (0.5 * (1.0 + n[2])).max(0.0).sqrt();
    let sin_half = (0.5 * (1.0 - n[2])).max(0.0).sqrt();
    let rho = n[0].hypot(n[1]);
    let phase = if rho > 0.0 {
        Complex64::new(n[0] / rho, n[1] / rho)
    } else {
        ONE
    };
    ComplexVec2([Complex64::new(cos_half, 0.0), phase * sin_half])
}

/// Eigen-decomposition from the Pauli axis. A degenerate matrix returns the
/// computational basis.
pub fn hermitian_eigen(h: &ComplexMat2) -> Result<HermitianEigen> {
    h.check_hermitian()?;
    let p = PauliDecomposition::of(h);
    let r = p.strength();
    if r == 0.0 {
        return Ok(HermitianEigen {
            values: [p.a0, p.a0],
            vectors: [ComplexVec2::real(0.0, 1.0), ComplexVec2::real(1.0, 0.0)],
        });
    }
    let n = [p.a[0] / r, p.a[1] / r, p.a[2] / r];
    let plus = spinor_along(&n);
    // orthogonal partner: (-conj(c1), conj(c0)) has Bloch vector -n
    let minus = ComplexVec2([-plus.0[1].conj(), plus.0[0].conj()]);
    Ok(HermitianEigen {
        values: [p.a0 - r, p.a0 + r],
        vectors: [minus, plus],
    })
}

/// Principal square root of a positive-semidefinite 2x2 matrix.
pub fn sqrt_psd(m: &ComplexMat2) -> Result<ComplexMat2> {
    m.check_hermitian()?;
    let det = m.det().re.max(0.0);
    let s = det.sqrt();
    let t = (m.trace().re + 2.0 * s).sqrt();
    if t == 0.0 {
        return Ok(ComplexMat2::zero());
    }
    Ok((*m + ComplexMat2::identity().scale(Complex64::new(s, 0.0))).scale(Complex64::new(1.0 / t, 0.0)))
}

/// Polar decomposition `m = unitary * positive`, `positive = sqrt(m^dagger m)`.
/// Requires `m` invertible.
pub fn polar_decomposition(m: &ComplexMat2) -> Result<(ComplexMat2, ComplexMat2)> {
    if !m.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let positive = sqrt_psd(&(m.adjoint() * *m))?;
    let det = positive.det();
    if det.norm() <= STRUCTURE_TOL * positive.max_abs().max(1.0).powi(2) {
        return Err(Error::InvalidParameter {
            name: "det",
            value: det.norm(),
            reason: "polar decomposition needs an invertible matrix",
        });
    }
    let p = &positive.0;
    let inv = ComplexMat2([[p[1][1], -p[0][1]], [-p[1][0], p[0][0]]]).scale(det.inv());
    Ok((*m * inv, positive))
}

/// Result of [`grid_search_max`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMax {
    pub argmax: f64,
    pub max: f64,
}

/// Maximizes `f` on `[a, b]`: best of `n` equally spaced points, then one
/// golden-section refinement inside the neighbouring grid cells.
pub fn grid_search_max<F>(f: F, a: f64, b: f64, n: usize) -> Result<GridMax>
where
    F: Fn(f64) -> f64,
{
    if n < 2 {
        return Err(Error::TooFewSamples { got: n, need: 2 });
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter {
            name: "interval",
            value: b - a,
            reason: "need finite a < b",
        });
    }
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { at: x })
        }
    };
    let step = (b - a) / (n - 1) as f64;
    let mut best = GridMax {
        argmax: a,
        max: eval(a)?,
    };
    let mut best_k = 0;
    for k in 1..n {
        let x = if k == n - 1 { b } else { a + step * k as f64 };
        let y = eval(x)?;
        if y > best.max {
            best = GridMax { argmax: x, max: y };
            best_k = k;
        }
    }

    let mut lo = a + step * best_k.saturating_sub(1) as f64;
    let mut hi = (a + step * (best_k + 1) as f64).min(b);
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + best.argmax.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1)?;
        }
    }
    let x = 0.5 * (lo + hi);
    let y = eval(x)?;
    if y >= best.max {
        best = GridMax { argmax: x, max: y };
    }
    Ok(best)
}

/// `(1/T) * integral_0^T f(t) dt` by the composite trapezoid rule on `n`
/// subdivisions. For periodic `f` the end points coincide, so this is the
/// plain mean of `n` equally spaced samples.
pub fn time_average_quadrature<F>(f: F, period: f64, n: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidParameter {
            name: "period",
            value: period,
            reason: "must be positive and finite",
        });
    }
    if n < 4 {
        return Err(Error::TooFewSamples { got: n, need: 4 });
    }
    let h = period / n as f64;
    let mut sum = 0.5 * (f(0.0) + f(period));
    if !sum.is_finite() {
        return Err(Error::NonFinite { at: 0.0 });
    }
    for k in 1..n {
        let t = h * k as f64;
        let y = f(t);
        if !y.is_finite() {
            return Err(Error::NonFinite { at: t });
        }
        sum += y;
    }
    Ok(sum / n as f64)
}
