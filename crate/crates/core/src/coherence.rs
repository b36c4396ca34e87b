//! Maximal degree of coherence and the quantum-optical correspondence.
//!
//! Rotating the transverse axes by `phi_opt` equalizes the two intensities
//! `Jxx` and `Jyy`; in that frame `|j_xy|` reaches its largest value `P`.
//! [`correspondence_report`] pairs this optical optimum with an optimal-speed
//! quantum evolution and checks the matching constraints side by side.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::bloch::QuantumState;
use crate::error::{Error, Result};
use crate::mueller::mueller_rotator;
use crate::numerics::CLOSED_FORM_TOL;
use crate::polarization::{
    degree_of_polarization, stokes_from_coherency, wiener_decompose, CoherencyMatrix, StokesVector,
};
use crate::speed_limit::{basis_alignment, efficiency, EfficiencyReport, SpeedLimit, SynthesisResult};

/// Optical-side tolerance for frame-dependent identities.
pub const OPTICAL_TOL: f64 = 1e-9;
/// Smallest degree of polarization for which a preferred frame exists.
pub const MIN_POLARIZATION: f64 = 1e-12;
/// Lower bound on the geometric efficiency accepted as unit efficiency for
/// sampled trajectories.
pub const ETA_TOL: f64 = 1e-6;

/// The frame rotation that maximizes the degree of coherence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RotationSolution {
    /// Canonical root in `(-pi/4, pi/4]`; all roots differ by multiples of `pi/2`.
    pub phi_opt: f64,
    pub j_before: f64,
    pub j_after: f64,
    pub p: f64,
    /// Orientation angle of the polarized part.
    pub chi: f64,
    pub rotated: CoherencyMatrix,
}

/// Intensity bookkeeping for a frame rotation applied to a Stokes vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstraintLedger {
    pub phi: f64,
    pub before: StokesVector,
    pub after: StokesVector,
    pub i_pol_before: f64,
    pub i_pol_after: f64,
    pub s1_sq_before: f64,
    pub s1_sq_after: f64,
    pub s2_sq_before: f64,
    pub s2_sq_after: f64,
    /// Largest `S2'^2` reachable by any rotation, `S1^2 + S2^2`.
    pub s2_sq_max: f64,
}

/// Principal axes against the optimal frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BisectorReport {
    pub chi: f64,
    pub phi_opt: f64,
    /// `(phi_opt - chi) mod pi/2`, equal to `pi/4` for a bisecting frame.
    pub offset: f64,
    /// `[|x'.xi|^2, |x'.eta|^2, |y'.xi|^2, |y'.eta|^2]`.
    pub squared_cosines: [f64; 4],
}

fn polarization_of(j: &CoherencyMatrix) -> Result<f64> {
    let p = degree_of_polarization(j)?.p;
    if p < MIN_POLARIZATION {
        return Err(Error::Unpolarized);
    }
    Ok(p)
}

/// Solves `tan(2 phi) = (Jyy - Jxx) / (Jxy + Jyx)` on the canonical branch
/// `(-pi/4, pi/4]`; 0 when the diagonal is already equal and `Re Jxy = 0`.
pub fn optimal_angle(j: &CoherencyMatrix) -> f64 {
    let y = j.jyy() - j.jxx();
    let x = 2.0 * j.jxy().re;
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    let mut two_phi = y.atan2(x);
    if two_phi <= -FRAC_PI_2 {
        two_phi += PI;
    } else if two_phi > FRAC_PI_2 {
        two_phi -= PI;
    }
    0.5 * two_phi
}

/// Rotation to the frame of equal intensities, where `|j| = P`.
pub fn optimal_rotation(j: &CoherencyMatrix) -> Result<RotationSolution> {
    let p = polarization_of(j)?;
    let phi_opt = optimal_angle(j);
    let rotated = j.rotated(phi_opt);
    Ok(RotationSolution {
        phi_opt,
        j_before: j.degree_of_coherence().norm(),
        j_after: rotated.degree_of_coherence().norm(),
        p,
        chi: wiener_decompose(j).chi,
        rotated,
    })
}

/// `eta_optics = |j_xy| / P` in the current frame.
pub fn optical_efficiency(j: &CoherencyMatrix) -> Result<f64> {
    let p = polarization_of(j)?;
    Ok((j.degree_of_coherence().norm() / p).min(1.0))
}

/// Rotates `s` with `M_ROT(phi)` and records the intensity constraints.
/// Fails if `S0`, `S3` or `S1^2 + S2^2` change by more than `1e-10` (relative
/// to the intensity scale).
pub fn stokes_rotation_check(s: &StokesVector, phi: f64) -> Result<ConstraintLedger> {
    let after = mueller_rotator(phi).apply(s)?;
    let scale = s.s0().max(1.0);
    let tol = CLOSED_FORM_TOL * scale;
    let checks = [
        ("S0 changed under rotation", (after.s0() - s.s0()).abs(), tol),
        ("S3 changed under rotation", (after.s3() - s.s3()).abs(), tol),
        (
            "S1^2 + S2^2 changed under rotation",
            (after.s1().powi(2) + after.s2().powi(2) - s.s1().powi(2) - s.s2().powi(2)).abs(),
            tol * scale,
        ),
    ];
    for (what, residual, limit) in checks {
        if residual > limit {
            return Err(Error::InvariantViolation { what, residual });
        }
    }
    Ok(ConstraintLedger {
        phi,
        before: *s,
        after,
        i_pol_before: s.polarized_intensity(),
        i_pol_after: after.polarized_intensity(),
        s1_sq_before: s.s1().powi(2),
        s1_sq_after: after.s1().powi(2),
        s2_sq_before: s.s2().powi(2),
        s2_sq_after: after.s2().powi(2),
        s2_sq_max: s.s1().powi(2) + s.s2().powi(2),
    })
}

fn squared_cosines(phi: f64, chi: f64) -> [f64; 4] {
    let d = phi - chi;
    let (s, c) = d.sin_cos();
    // x' . xi = cos(phi - chi), x' . eta = sin(phi - chi), and the same for y' up to sign
    [c * c, s * s, s * s, c * c]
}

fn is_circular(j: &CoherencyMatrix) -> bool {
    let lin = ((j.jxx() - j.jyy()).powi(2) + 4.0 * j.jxy().re.powi(2)).sqrt();
    lin <= MIN_POLARIZATION * j.trace()
}

/// Relation between the principal axes `(xi, eta)` of the polarized part and
/// the optimal axes `(x', y')`: the latter bisect the former.
pub fn bisector_geometry(j: &CoherencyMatrix) -> Result<BisectorReport> {
    polarization_of(j)?;
    if is_circular(j) {
        return Err(Error::CircularPolarization);
    }
    let chi = wiener_decompose(j).chi;
    let phi_opt = optimal_angle(j);
    Ok(BisectorReport {
        chi,
        phi_opt,
        offset: (phi_opt - chi).rem_euclid(FRAC_PI_2),
        squared_cosines: squared_cosines(phi_opt, chi),
    })
}

/// A synthesized evolution together with the efficiency of a sampled
/// trajectory between the same endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuantumScenario {
    pub synthesis: SynthesisResult,
    pub efficiency: EfficiencyReport,
}

impl QuantumScenario {
    /// Uncertainty-maximizing evolution sampled at `samples` points along the
    /// propagator.
    pub fn optimal(
        sl: &SpeedLimit,
        a: &QuantumState,
        b: &QuantumState,
        e: f64,
        samples: usize,
    ) -> Result<Self> {
        let synthesis = sl.synthesize_max_uncertainty(a, b, e)?;
        let traj = sample_evolution(sl, &synthesis, samples)?;
        Ok(Self {
            synthesis,
            efficiency: efficiency(&traj)?,
        })
    }
}

/// `n` states `exp(-i H t / hbar) a` at equally spaced times in `[0, t_min]`.
pub fn sample_evolution(sl: &SpeedLimit, r: &SynthesisResult, n: usize) -> Result<Vec<QuantumState>> {
    if n < 2 {
        return Err(Error::TooFewSamples { got: n, need: 2 });
    }
    (0..n)
        .map(|k| {
            let t = r.t_min * k as f64 / (n - 1) as f64;
            sl.evolve(r.hamiltonian.matrix(), &r.initial, t)
        })
        .collect()
}

/// A coherency matrix viewed in a chosen frame, with the optimum for reference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OpticalScenario {
    pub input: CoherencyMatrix,
    pub solution: RotationSolution,
    pub applied_rotation: f64,
    pub ledger: ConstraintLedger,
}

impl OpticalScenario {
    /// Applies `rotation`, or the optimal rotation when `None`.
    pub fn new(j: &CoherencyMatrix, rotation: Option<f64>) -> Result<Self> {
        let solution = optimal_rotation(j)?;
        let applied_rotation = rotation.unwrap_or(solution.phi_opt);
        let ledger = stokes_rotation_check(&stokes_from_coherency(j)?, applied_rotation)?;
        Ok(Self {
            input: *j,
            solution,
            applied_rotation,
            ledger,
        })
    }

    pub fn optimal(j: &CoherencyMatrix) -> Result<Self> {
        Self::new(j, None)
    }

    pub fn rotated(&self) -> CoherencyMatrix {
        self.input.rotated(self.applied_rotation)
    }
}

/// One quantum-optical pairing with a verdict on each side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrespondenceRow {
    pub name: &'static str,
    pub table: &'static str,
    pub quantum_relation: &'static str,
    pub optical_relation: &'static str,
    pub quantum_residual: f64,
    pub optical_residual: f64,
    pub quantum_pass: bool,
    pub optical_pass: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    pub rows: Vec<CorrespondenceRow>,
    pub all_pass: bool,
}

impl CorrespondenceReport {
    pub fn row(&self, name: &str) -> Option<&CorrespondenceRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Plain-text table, one line per row.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<32} {:<5} {:>12} {:>12}  {}\n",
            "row", "table", "quantum", "optical", "verdict"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<32} {:<5} {:>12.3e} {:>12.3e}  {}\n",
                r.name,
                r.table,
                r.quantum_residual,
                r.optical_residual,
                if r.pass { "pass" } else { "FAIL" }
            ));
        }
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn row(
    name: &'static str,
    table: &'static str,
    quantum_relation: &'static str,
    optical_relation: &'static str,
    (quantum_residual, q_tol): (f64, f64),
    (optical_residual, o_tol): (f64, f64),
    note: Option<&'static str>,
) -> CorrespondenceRow {
    let quantum_pass = quantum_residual <= q_tol;
    let optical_pass = optical_residual <= o_tol;
    CorrespondenceRow {
        name,
        table,
        quantum_relation,
        optical_relation,
        quantum_residual,
        optical_residual,
        quantum_pass,
        optical_pass,
        pass: quantum_pass && optical_pass,
        note,
    }
}

/// Checks each structural correspondence between an optimal-speed evolution
/// and a maximal-coherence frame. Quantum entries are read in the basis where
/// the initial state is `(1, 0)`.
pub fn correspondence_report(
    quantum: &QuantumScenario,
    optical: &OpticalScenario,
    hbar: f64,
) -> Result<CorrespondenceReport> {
    let syn = &quantum.synthesis;
    let eff = &quantum.efficiency;
    if (eff.s0 - syn.theta_ab).abs() > 1e-9 {
        return Err(Error::PairingMismatch(format!(
            "trajectory spans {} rad but the synthesis connects states {} rad apart",
            eff.s0, syn.theta_ab
        )));
    }
    let report = degree_of_polarization(&optical.input)?;
    if (optical.ledger.i_pol_before - report.i_pol).abs() > OPTICAL_TOL * report.i_tot.max(1.0) {
        return Err(Error::PairingMismatch(format!(
            "ledger polarized intensity {} does not belong to the coherency matrix ({})",
            optical.ledger.i_pol_before, report.i_pol
        )));
    }
    if optical.ledger.phi != optical.applied_rotation {
        return Err(Error::PairingMismatch(
            "ledger and coherency frame use different rotations".into(),
        ));
    }

    let h = &syn.hamiltonian;
    let v = basis_alignment(&syn.initial);
    let aligned = v * *h.matrix() * v.adjoint();
    let (h11, h22, h12) = (aligned.get(0, 0).re, aligned.get(1, 1).re, aligned.get(0, 1));
    let q_scale = h.matrix().max_abs().max(1.0);
    let q_tol = CLOSED_FORM_TOL * q_scale;
    let gap = h.gap();

    let rotated = optical.rotated();
    let o_scale = optical.input.trace().max(1.0);
    let o_tol = OPTICAL_TOL * o_scale;
    let i_pol = report.i_pol;
    let p = report.p;
    let j_rot = rotated.degree_of_coherence().norm();

    let overlaps = h.eigenbasis_overlaps(&syn.initial);
    let overlap_residual = overlaps.iter().map(|o| (o - 0.5).abs()).fold(0.0, f64::max);
    let (cos_residual, cos_note) = if is_circular(&optical.input) {
        (
            (rotated.jxx() - rotated.jyy()).abs() / o_scale,
            Some("polarized part is circular; any frame with equal intensities bisects it"),
        )
    } else {
        let chi = wiener_decompose(&optical.input).chi;
        let c = squared_cosines(optical.applied_rotation, chi);
        (c.iter().map(|x| (x - 0.5).abs()).fold(0.0, f64::max), None)
    };

    let ledger = &optical.ledger;
    let rotation_angle = h.strength() * syn.t_min / hbar;
    let half_angle = syn.initial.inner(&syn.target).norm().min(1.0).acos();

    let rows = vec![
        row(
            "constraint_conservation",
            "II",
            "(E+ - E-)^2 = (h11 - h22)^2 + 4|h12|^2",
            "I_pol^2 = (Jxx - Jyy)^2 + 4|Jxy|^2 unchanged by rotation",
            (h.constraint_residual(), CLOSED_FORM_TOL * q_scale * q_scale),
            ((optical.input.i_pol_sq() - rotated.i_pol_sq()).abs(), o_tol * o_scale),
            None,
        ),
        row(
            "equal_diagonals",
            "I",
            "h11 = h22",
            "Jx'x' = Jy'y'",
            ((h11 - h22).abs(), q_tol),
            ((rotated.jxx() - rotated.jyy()).abs(), o_tol),
            None,
        ),
        row(
            "maximal_off_diagonal",
            "II",
            "|h12| = E0/2",
            "|Jx'y'| = I_pol/2",
            ((h12.norm() - 0.5 * gap).abs(), q_tol),
            ((rotated.jxy().norm() - 0.5 * i_pol).abs(), o_tol),
            None,
        ),
        row(
            "balanced_overlaps",
            "I",
            "|<E+-|A>|^2 = |<E+-|A_perp>|^2 = 1/2",
            "|x'.xi|^2 = |x'.eta|^2 = |y'.xi|^2 = |y'.eta|^2 = 1/2",
            (overlap_residual, CLOSED_FORM_TOL),
            (cos_residual, OPTICAL_TOL),
            cos_note,
        ),
        row(
            "maximal_dispersion_correlation",
            "II",
            "Delta E = (E+ - E-)/2 and t_min Delta E = hbar theta_AB / 2",
            "S1'^2 = 0 and S2'^2 = max over rotations",
            (
                (syn.delta_e - 0.5 * gap)
                    .abs()
                    .max((syn.t_min * syn.delta_e - 0.5 * hbar * syn.theta_ab).abs()),
                q_tol,
            ),
            (
                ledger.s1_sq_after.max((ledger.s2_sq_after - ledger.s2_sq_max).abs()),
                o_tol * o_scale,
            ),
            None,
        ),
        row(
            "rotation_angle",
            "III",
            "|a| t_min / hbar = arccos |<A|B>|",
            "M_ROT(phi) S has S1' = 0",
            ((rotation_angle - half_angle).abs(), CLOSED_FORM_TOL),
            (ledger.after.s1().abs(), o_tol),
            None,
        ),
        row(
            "unit_efficiency",
            "I",
            "eta_QM = s0 / s = 1",
            "eta_optics = |j_x'y'| / P = 1",
            (1.0 - eff.eta_qm, ETA_TOL),
            ((1.0 - (j_rot / p).min(1.0)).abs(), OPTICAL_TOL),
            None,
        ),
    ];
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(CorrespondenceReport { rows, all_pass })
}

/// `|(phi_opt - chi) mod pi/2 - pi/4|`.
pub fn bisector_offset_residual(b: &BisectorReport) -> f64 {
    (b.offset - FRAC_PI_4).abs()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    use num_complex::Complex64;
    use proptest::prelude::*;

    use super::*;
    use crate::numerics::{grid_search_max, ComplexVec2};
    use crate::polarization::{partial_coherence_profile, EllipseAngles};

    fn cm(jxx: f64, jyy: f64, re: f64, im: f64) -> CoherencyMatrix {
        CoherencyMatrix::new(jxx, jyy, Complex64::new(re, im)).unwrap()
    }

    fn worked() -> CoherencyMatrix {
        cm(3.0, 1.0, 1.0, 0.0)
    }

    #[test]
    fn equal_diagonal_needs_no_rotation() {
        let s = optimal_rotation(&cm(1.0, 1.0, 0.4, 0.3)).unwrap();
        assert_eq!(s.phi_opt, 0.0);
        let s = optimal_rotation(&cm(1.0, 1.0, -0.4, 0.3)).unwrap();
        assert_eq!(s.phi_opt, 0.0);
        let s = optimal_rotation(&cm(1.0, 1.0, 0.0, 0.5)).unwrap();
        assert_eq!(s.phi_opt, 0.0);
    }

    #[test]
    fn worked_rotation() {
        let s = optimal_rotation(&worked()).unwrap();
        assert!((s.phi_opt + FRAC_PI_8).abs() < 1e-15);
        assert!((s.j_after - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.p - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.rotated.jxx() - s.rotated.jyy()).abs() < 1e-12);
        // the grid oracle over [0, pi) confirms the maximum and its lattice position
        let g = grid_search_max(|phi| worked().rotated(phi).degree_of_coherence().norm(), 0.0, PI, 1_000_001)
            .unwrap();
        assert!((g.max - FRAC_1_SQRT_2).abs() < 1e-9);
        let lattice = (g.argmax - s.phi_opt).rem_euclid(FRAC_PI_2);
        assert!(lattice.min(FRAC_PI_2 - lattice) < 1e-6);
    }

    #[test]
    fn horizontal_linear_rotation() {
        let s = optimal_rotation(&cm(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((s.phi_opt - FRAC_PI_4).abs() < 1e-15);
        assert!((s.j_after - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unpolarized_is_rejected() {
        assert!(matches!(optimal_rotation(&cm(1.0, 1.0, 0.0, 0.0)), Err(Error::Unpolarized)));
        assert!(matches!(optical_efficiency(&cm(2.0, 2.0, 0.0, 0.0)), Err(Error::Unpolarized)));
        assert!(matches!(optimal_rotation(&cm(0.0, 0.0, 0.0, 0.0)), Err(Error::ZeroIntensity)));
    }

    #[test]
    fn efficiency_examples() {
        let s = optimal_rotation(&worked()).unwrap();
        assert!((optical_efficiency(&s.rotated).unwrap() - 1.0).abs() < 1e-9);
        assert!((optical_efficiency(&worked()).unwrap() - (2.0_f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(optical_efficiency(&cm(2.0, 1.0, 0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn ledger_examples() {
        let s = StokesVector::new(2.0, 0.5, -0.3, 1.1).unwrap();
        let l = stokes_rotation_check(&s, 0.0).unwrap();
        assert_eq!(l.before, l.after);
        let l = stokes_rotation_check(&StokesVector::new(1.0, 1.0, 0.0, 0.0).unwrap(), FRAC_PI_4).unwrap();
        assert!(l.s1_sq_after < 1e-30);
        assert!((l.s2_sq_after - 1.0).abs() < 1e-15);
        let sw = stokes_from_coherency(&worked()).unwrap();
        let l = stokes_rotation_check(&sw, optimal_rotation(&worked()).unwrap().phi_opt).unwrap();
        assert!(l.after.s1().abs() < 1e-10);
        assert!((l.i_pol_before - l.i_pol_after).abs() < 1e-10);
    }

    #[test]
    fn bisector_examples() {
        let b = bisector_geometry(&worked()).unwrap();
        assert!((b.chi - FRAC_PI_8).abs() < 1e-15);
        assert!((b.phi_opt + FRAC_PI_8).abs() < 1e-15);
        assert!(bisector_offset_residual(&b) < 1e-8);
        let b = bisector_geometry(&cm(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(b.chi, 0.0);
        assert!((b.phi_opt - FRAC_PI_4).abs() < 1e-15);
        let b = bisector_geometry(&cm(1.0, 1.0, 0.5, 0.0)).unwrap();
        assert!((b.chi - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(b.phi_opt, 0.0);
        assert!((b.phi_opt - b.chi + FRAC_PI_4).abs() < 1e-15);
        for c in b.squared_cosines {
            assert!((c - 0.5).abs() < 1e-9);
        }
        assert!(matches!(
            bisector_geometry(&cm(1.0, 1.0, 0.0, 0.7)),
            Err(Error::CircularPolarization)
        ));
    }

    fn quantum() -> QuantumScenario {
        let b = QuantumState::normalize(ComplexVec2::real(1.0, 1.0)).unwrap();
        QuantumScenario::optimal(&SpeedLimit::default(), &QuantumState::ground(), &b, 0.5, 101).unwrap()
    }

    #[test]
    fn worked_correspondence_passes() {
        let r = correspondence_report(&quantum(), &OpticalScenario::optimal(&worked()).unwrap(), 1.0).unwrap();
        assert!(r.all_pass, "{}", r.to_table());
        assert_eq!(r.rows.len(), 7);
    }

    #[test]
    fn detour_fails_on_quantum_side_only() {
        let q = quantum();
        let a = q.synthesis.initial;
        let b = q.synthesis.target;
        let c = QuantumState::normalize(ComplexVec2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))).unwrap();
        let detour = QuantumScenario {
            efficiency: efficiency(&[a, c, a, b]).unwrap(),
            ..q
        };
        let r = correspondence_report(&detour, &OpticalScenario::optimal(&worked()).unwrap(), 1.0).unwrap();
        let eta = r.row("unit_efficiency").unwrap();
        assert!(!eta.quantum_pass && eta.optical_pass);
        assert_eq!(r.rows.iter().filter(|r| !r.pass).count(), 1);
    }

    #[test]
    fn half_rotation_fails_off_diagonal_row() {
        let phi = optimal_rotation(&worked()).unwrap().phi_opt / 2.0;
        let o = OpticalScenario::new(&worked(), Some(phi)).unwrap();
        let r = correspondence_report(&quantum(), &o, 1.0).unwrap();
        assert!(!r.row("maximal_off_diagonal").unwrap().optical_pass);
        assert!(r.row("maximal_off_diagonal").unwrap().quantum_pass);
        assert!(r.row("constraint_conservation").unwrap().pass);
    }

    #[test]
    fn mismatched_pairing_is_rejected() {
        let q = quantum();
        let bad = QuantumScenario {
            efficiency: EfficiencyReport {
                s0: 0.1,
                s: 0.1,
                eta_qm: 1.0,
            },
            ..q
        };
        let o = OpticalScenario::optimal(&worked()).unwrap();
        assert!(matches!(correspondence_report(&bad, &o, 1.0), Err(Error::PairingMismatch(_))));
        let mut o2 = o;
        o2.ledger = stokes_rotation_check(&StokesVector::new(4.0, 0.0, 0.0, 0.0).unwrap(), o.applied_rotation)
            .unwrap();
        assert!(matches!(correspondence_report(&q, &o2, 1.0), Err(Error::PairingMismatch(_))));
    }

    fn arb_coherency() -> impl Strategy<Value = CoherencyMatrix> {
        (0.1..5.0f64, 0.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.05..1.0f64).prop_map(
            |(tot, frac, re, im, shrink)| {
                let jxx = tot * frac;
                let jyy = tot - jxx;
                let n = (re * re + im * im).sqrt().max(1.0);
                let m = shrink * (jxx * jyy).sqrt() / n;
                cm(jxx, jyy, re * m, im * m)
            },
        )
    }

    proptest! {
        #[test]
        fn rotation_reaches_p(j in arb_coherency()) {
            prop_assume!(degree_of_polarization(&j).unwrap().p > 1e-3);
            let s = optimal_rotation(&j).unwrap();
            prop_assert!((s.rotated.jxx() - s.rotated.jyy()).abs() < 1e-9);
            prop_assert!((s.j_after - s.p).abs() < 1e-9);
            prop_assert!(s.phi_opt > -FRAC_PI_4 && s.phi_opt <= FRAC_PI_4);
        }

        #[test]
        fn i_pol_is_rotation_invariant(j in arb_coherency(), phi in -PI..PI) {
            prop_assert!((j.i_pol_sq() - j.rotated(phi).i_pol_sq()).abs() < 1e-9);
        }

        #[test]
        fn optimal_frame_has_quarter_turn_orientation(beta in -0.7..0.7f64, chi in 0.0..PI, p in 0.05..1.0f64) {
            let j = CoherencyMatrix::from_polarization(EllipseAngles::new(beta, chi).unwrap(), p, 1.0).unwrap();
            prop_assume!(!is_circular(&j));
            let s = optimal_rotation(&j).unwrap();
            let chi_after = wiener_decompose(&s.rotated).chi;
            prop_assert!((chi_after - FRAC_PI_4).abs() < 1e-7 || (chi_after - 3.0 * FRAC_PI_4).abs() < 1e-7);
            let profile = partial_coherence_profile(beta, FRAC_PI_4, p).unwrap();
            prop_assert!((s.j_after - profile).abs() < 1e-9);
        }
    }
}
