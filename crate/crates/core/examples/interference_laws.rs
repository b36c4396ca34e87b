// Interference of light vibrations, of polarized beams and of amplitudes.

use std::error::Error;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use bloch_poincare::interference::{
    analogy_triple, classical_intensity, fringe_visibility, intensity_sweep, pancharatnam_intensity,
    quantum_probability, ClassicalInterferenceInput, QuantumInterferenceInput,
};
use bloch_poincare::numerics::ComplexVec2;
use bloch_poincare::{CoherencyMatrix, QuantumState};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let j = CoherencyMatrix::from_real(3.0, 1.0, 1.0)?;
    let input = ClassicalInterferenceInput::new(j, FRAC_PI_4, 0.0)?;
    println!("I(pi/4, 0) = {:.6}, visibility {:.6}", classical_intensity(&input), fringe_visibility(&input));

    let sweep = intensity_sweep(&j, &[FRAC_PI_4], &[0.0, FRAC_PI_2, PI])?;
    for p in &sweep {
        println!("  epsilon = {:.4}: I = {:.6}", p.epsilon, p.intensity);
    }

    println!("Pancharatnam, quarter-sphere apart: {:.6}", pancharatnam_intensity(1.0, 1.0, FRAC_PI_2, 0.0)?);

    let a = QuantumState::ground();
    let b = QuantumState::normalize(ComplexVec2::real(1.0, 1.0))?;
    let q = QuantumInterferenceInput {
        a_amp: Complex64::new(1.0, 0.0),
        b_amp: Complex64::from_polar(1.0, 0.3),
        state_a: a,
        state_b: b,
    };
    println!("p_a+b = {:.12}, direct {:.12}", quantum_probability(&q), q.direct_probability());

    let equal = CoherencyMatrix::from_real(1.0, 1.0, FRAC_1_SQRT_2)?;
    let t = analogy_triple(&equal, &a, &b, 1e-10)?;
    println!(
        "|j| = {:.6}, cos(theta_P/2) = {:.6}, |<A|B>| = {:.6}, agree: {}",
        t.coherence, t.poincare_cosine, t.bloch_cosine, t.pass
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
