// Jones matrices lifted to Mueller matrices, and Mueller classification.

use std::error::Error;
use std::f64::consts::FRAC_PI_8;

use bloch_poincare::mueller::{
    classify_mueller, mueller_from_jones, mueller_rotator, rotation_block_check, wigner_rotation, DEFAULT_SEED,
};
use bloch_poincare::{JonesMatrix, MuellerMatrix, StokesVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let rot = JonesMatrix::rotation(FRAC_PI_8);
    let lifted = mueller_from_jones(&rot)?;
    let traced = wigner_rotation(&rot)?;
    println!("rotation by pi/8 lifted to Stokes space:");
    for row in lifted.matrix().0 {
        println!("  [{:+.6} {:+.6} {:+.6} {:+.6}]", row[0], row[1], row[2], row[3]);
    }
    println!("trace formula agrees within {:.1e}", lifted.max_abs_diff(&traced));
    println!("M_ROT(pi/8) agrees within {:.1e}", lifted.max_abs_diff(&mueller_rotator(FRAC_PI_8)));
    let (det, ortho) = rotation_block_check(&lifted);
    println!("rotation block det {det:.12}, orthogonality residual {ortho:.1e}");

    let s = StokesVector::new(4.0, 2.0, 2.0, 0.0)?;
    println!("S = {:?} -> {:?}", s.to_array(), lifted.apply(&s)?.to_array());

    for (name, m) in [
        ("polarizer", mueller_from_jones(&JonesMatrix::horizontal_polarizer())?),
        ("depolarizer", MuellerMatrix::ideal_depolarizer()),
    ] {
        println!("{name}: {:?}", classify_mueller(&m, DEFAULT_SEED)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
