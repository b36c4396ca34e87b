//! Jones and Mueller calculus.
//!
//! A Jones matrix acts on the complex field `(E_x, E_y)`; the Mueller matrix
//! it induces acts on Stokes vectors. For unitary Jones matrices the Mueller
//! matrix is `diag(1, R)` with `R` a proper rotation, the image of SU(2) in
//! SO(3).

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{det3, ComplexMat2, ComplexMat4, ComplexVec2, RealMat4, I, ONE, ZERO};
use crate::polarization::StokesVector;

/// Largest imaginary part tolerated in `A (J x J*) A^-1` before it is dropped.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;
/// Unitarity tolerance for inputs to [`wigner_rotation`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Number of fully polarized probes used by [`classify_mueller`].
pub const CLASSIFY_PROBES: usize = 1000;
/// Degree-of-polarization slack used by [`classify_mueller`].
pub const CLASSIFY_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

/// A 2x2 complex field transformation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JonesMatrix(ComplexMat2);

impl JonesMatrix {
    pub fn new(m: ComplexMat2) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        Ok(Self(m))
    }

    /// Accepts `m` only if `m^dagger m = I` within `1e-10`.
    pub fn unitary(m: ComplexMat2) -> Result<Self> {
        m.check_unitary(UNITARY_TOL)?;
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(ComplexMat2::identity())
    }

    /// Frame rotation `[[cos, sin], [-sin, cos]]`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self(ComplexMat2::from_real([[c, s], [-s, c]]))
    }

    /// Ideal linear polarizer along x.
    pub fn horizontal_polarizer() -> Self {
        Self(ComplexMat2::from_real([[1.0, 0.0], [0.0, 0.0]]))
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.0
    }

    pub fn apply(&self, e: &ComplexVec2) -> ComplexVec2 {
        self.0.apply(e)
    }

    pub fn is_unitary(&self) -> bool {
        self.0.unitarity_residual() <= UNITARY_TOL
    }
}

impl std::ops::Mul for JonesMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// A real 4x4 map on Stokes vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuellerMatrix(RealMat4);

impl MuellerMatrix {
    pub fn new(m: RealMat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(RealMat4::identity())
    }

    /// `diag(1, 0, 0, 0)`.
    pub fn ideal_depolarizer() -> Self {
        Self(RealMat4::diag([1.0, 0.0, 0.0, 0.0]))
    }

    pub fn matrix(&self) -> &RealMat4 {
        &self.0
    }

    pub fn apply_raw(&self, s: &[f64; 4]) -> [f64; 4] {
        self.0.apply(s)
    }

    pub fn apply(&self, s: &StokesVector) -> Result<StokesVector> {
        StokesVector::from_array(self.0.apply(&s.to_array()))
    }

    /// Lower-right 3x3 block.
    pub fn rotation_block(&self) -> [[f64; 3]; 3] {
        self.0.block3()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

impl std::ops::Mul for MuellerMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuellerClass {
    Nondepolarizing,
    Depolarizing,
}

/// `A` with rows `(1,0,0,1)`, `(1,0,0,-1)`, `(0,1,1,0)`, `(0,-i,i,0)`, the
/// coefficients of `I`, `sigma_z`, `sigma_x`, `sigma_y`. It maps the
/// vectorized `E (x) E*` to `(S0, S1, S2, S3)`.
pub fn stokes_transfer_matrix() -> ComplexMat4 {
    ComplexMat4([
        [ONE, ZERO, ZERO, ONE],
        [ONE, ZERO, ZERO, -ONE],
        [ZERO, ONE, ONE, ZERO],
        [ZERO, -I, I, ZERO],
    ])
}

/// `A^-1 = A^dagger / 2`.
pub fn stokes_transfer_inverse() -> ComplexMat4 {
    stokes_transfer_matrix().adjoint().scale(Complex64::new(0.5, 0.0))
}

/// The unitary `U = conj(A) / sqrt2` for which `U (J* x J) U^dagger` gives
/// the same Mueller matrix as `A (J x J*) A^-1`.
pub fn stokes_basis_unitary() -> ComplexMat4 {
    let a = stokes_transfer_matrix();
    let mut m = a.0;
    m.iter_mut().flatten().for_each(|e| *e = e.conj() * FRAC_1_SQRT_2);
    ComplexMat4(m)
}

fn real_part_checked(m: &ComplexMat4) -> Result<MuellerMatrix> {
    let (re, residue) = m.split_real();
    if residue > IMAGINARY_RESIDUE_TOL * re.0.iter().flatten().fold(1.0_f64, |a, x| a.max(x.abs())) {
        return Err(Error::ImaginaryResidue { residue });
    }
    MuellerMatrix::new(re)
}

/// `M = A (J x J*) A^-1`.
pub fn mueller_from_jones(j: &JonesMatrix) -> Result<MuellerMatrix> {
    let a = stokes_transfer_matrix();
    let m = a * j.0.kron(&j.0.conj()) * stokes_transfer_inverse();
    real_part_checked(&m)
}

/// `M = U (J* x J) U^dagger` with [`stokes_basis_unitary`].
pub fn mueller_via_basis_unitary(j: &JonesMatrix) -> Result<MuellerMatrix> {
    let u = stokes_basis_unitary();
    let m = u * j.0.conj().kron(&j.0) * u.adjoint();
    real_part_checked(&m)
}

/// The basis `Xi = (I, sigma_z, sigma_x, -sigma_y)` in which
/// `J = (1/2) sum S_i Xi_i`.
pub fn stokes_pauli_basis() -> [ComplexMat2; 4] {
    [
        ComplexMat2::identity(),
        ComplexMat2::pauli_z(),
        ComplexMat2::pauli_x(),
        ComplexMat2::pauli_y().scale(-ONE),
    ]
}

/// `M_ij = (1/2) tr(U^dagger Xi_i U Xi_j)` for unitary `U`.
pub fn wigner_rotation(u: &JonesMatrix) -> Result<MuellerMatrix> {
    u.0.check_unitary(UNITARY_TOL)?;
    Ok(wigner_matrix(&u.0))
}

/// The same trace formula for any complex `U`; for non-unitary `U` it equals
/// [`mueller_from_jones`] and combines a rotation with a change of length.
pub fn wigner_matrix(u: &ComplexMat2) -> MuellerMatrix {
    let xi = stokes_pauli_basis();
    let ud = u.adjoint();
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        let left = ud * xi[i] * *u;
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = 0.5 * (left * xi[j]).trace().re;
        }
    }
    MuellerMatrix(RealMat4(m))
}

/// `M_ROT(phi)`: identity on `S0` and `S3`, rotation by `2 phi` mixing
/// `S1` and `S2` with `S1' = cos(2phi) S1 + sin(2phi) S2`.
pub fn mueller_rotator(phi: f64) -> MuellerMatrix {
    let (s, c) = (2.0 * phi).sin_cos();
    MuellerMatrix(RealMat4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, c, s, 0.0],
        [0.0, -s, c, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]))
}

/// `det` of the rotation block and `max |R^T R - I|`.
pub fn rotation_block_check(m: &MuellerMatrix) -> (f64, f64) {
    let r = m.rotation_block();
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - want).abs());
        }
    }
    (det3(&r), worst)
}

/// Probes `m` with fully polarized unit-intensity Stokes vectors drawn from a
/// seeded generator. Nondepolarizing when every output with nonzero intensity
/// is still fully polarized within `1e-8`.
pub fn classify_mueller(m: &MuellerMatrix, seed: u64) -> Result<MuellerClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = m.0 .0.iter().flatten().fold(0.0_f64, |a, x| a.max(x.abs()));
    let mut class = MuellerClass::Nondepolarizing;
    for _ in 0..CLASSIFY_PROBES {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let az: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        let probe = [1.0, r * az.cos(), r * az.sin(), z];
        let out = m.0.apply(&probe);
        if out[0].abs() <= 1e-9 * scale.max(1.0) && out[1..].iter().all(|x| x.abs() <= 1e-9 * scale.max(1.0)) {
            continue;
        }
        let s = StokesVector::from_array(out)
            .map_err(|e| Error::NonPhysicalMueller(format!("probe {probe:?} gave {out:?}: {e}")))?;
        if (s.degree_of_polarization() - 1.0).abs() > CLASSIFY_TOL {
            class = MuellerClass::Depolarizing;
        }
    }
    Ok(class)
}
