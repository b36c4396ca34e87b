// Stokes parameters, coherency matrices and the natural plus polarized split.

use std::error::Error;

use bloch_poincare::polarization::{
    coherency_from_stokes, degree_of_polarization, poincare_from_angles, stokes_from_coherency, stokes_from_fields,
    verify_ellipse_point, wiener_decompose,
};
use bloch_poincare::{CoherencyMatrix, EllipseAngles, FieldAmplitudes};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f = FieldAmplitudes::new(1.0, 0.6, 0.0, 0.9, 1.0)?;
    let s = stokes_from_fields(&f);
    println!("monochromatic field: S = {:?}", s.to_array());
    println!("ellipse residual at t = 0.4: {:.1e}", verify_ellipse_point(&f, 0.4)?);

    let j = CoherencyMatrix::from_real(3.0, 1.0, 1.0)?;
    let r = degree_of_polarization(&j)?;
    println!("J = [[3, 1], [1, 1]]: P = {:.6}, |j| = {:.6}, I_pol = {:.6}", r.p, r.j_abs, r.i_pol);

    let w = wiener_decompose(&j);
    println!(
        "natural part D^2 = {:.6}, polarized part along chi = {:.6} rad, residual {:.1e}",
        w.d_sq, w.chi, w.reconstruction_residual
    );

    let pol = poincare_from_angles(EllipseAngles::new(0.2, 1.0)?, 2.0)?;
    let back = stokes_from_coherency(&coherency_from_stokes(&pol))?;
    println!("Poincare point {:?} round trip {:?}", pol.to_array(), back.to_array());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
