// States on the Bloch sphere: angles, vectors and the Fubini-Study distance.

use std::error::Error;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use bloch_poincare::bloch::{bloch_vector, fidelity, fubini_study_angle, state_from_angles};
use bloch_poincare::numerics::{hermitian_eigen, polar_decomposition, ComplexMat2};
use bloch_poincare::BlochAngles;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let north = state_from_angles(BlochAngles::new(0.0, 0.0)?);
    let s = state_from_angles(BlochAngles::new(FRAC_PI_2, FRAC_PI_3)?);
    let [x, y, z] = bloch_vector(&s);
    println!("|psi> = ({:.4}, {:.4})", s.c0(), s.c1());
    println!("Bloch vector ({x:.4}, {y:.4}, {z:.4})");

    let angle = fubini_study_angle(&north, &s);
    println!("angle from |0>: {angle:.6} rad, fidelity {:.6}", fidelity(&north, &s));
    assert!((angle - FRAC_PI_2).abs() < 1e-12);

    let back = s.angles();
    assert!((back.phi() - FRAC_PI_3).abs() < 1e-12);

    let h = ComplexMat2::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.5, -0.5),
        Complex64::new(0.5, 0.5),
        Complex64::new(-1.0, 0.0),
    );
    let eig = hermitian_eigen(&h)?;
    println!("eigenvalues {:.6} {:.6}", eig.values[0], eig.values[1]);

    let (u, p) = polar_decomposition(&h)?;
    println!("polar factors: unitarity residual {:.1e}, |U P - H| = {:.1e}", u.unitarity_residual(), (u * p).max_abs_diff(&h));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
