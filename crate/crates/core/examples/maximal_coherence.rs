// The frame rotation that makes the degree of coherence equal to the degree
// of polarization.

use std::error::Error;

use bloch_poincare::coherence::{bisector_geometry, optical_efficiency, optimal_rotation, stokes_rotation_check};
use bloch_poincare::polarization::stokes_from_coherency;
use bloch_poincare::CoherencyMatrix;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for j in [
        CoherencyMatrix::from_real(3.0, 1.0, 1.0)?,
        CoherencyMatrix::new(2.0, 0.5, Complex64::new(0.3, 0.4))?,
    ] {
        let sol = optimal_rotation(&j)?;
        println!("Jxx = {}, Jyy = {}, Jxy = {}", j.jxx(), j.jyy(), j.jxy());
        println!(
            "  phi_opt = {:.8} rad, |j| {:.6} -> {:.6}, P = {:.6}",
            sol.phi_opt, sol.j_before, sol.j_after, sol.p
        );
        println!(
            "  efficiency {:.6} -> {:.6}",
            optical_efficiency(&j)?,
            optical_efficiency(&sol.rotated)?
        );

        let ledger = stokes_rotation_check(&stokes_from_coherency(&j)?, sol.phi_opt)?;
        println!(
            "  S1^2 {:.6} -> {:.1e}, S2^2 {:.6} -> {:.6} (max {:.6})",
            ledger.s1_sq_before, ledger.s1_sq_after, ledger.s2_sq_before, ledger.s2_sq_after, ledger.s2_sq_max
        );

        let b = bisector_geometry(&j)?;
        println!("  chi = {:.6}, (phi_opt - chi) mod pi/2 = {:.6}", b.chi, b.offset);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
