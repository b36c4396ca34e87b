// An optimal-speed qubit evolution paired with a maximal-coherence frame.

use std::error::Error;

use bloch_poincare::coherence::{correspondence_report, optimal_rotation, OpticalScenario, QuantumScenario};
use bloch_poincare::numerics::ComplexVec2;
use bloch_poincare::{CoherencyMatrix, QuantumState, SpeedLimit};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sl = SpeedLimit::default();
    let a = QuantumState::ground();
    let b = QuantumState::normalize(ComplexVec2::real(1.0, 1.0))?;
    let quantum = QuantumScenario::optimal(&sl, &a, &b, 0.5, 101)?;
    let j = CoherencyMatrix::from_real(3.0, 1.0, 1.0)?;

    let report = correspondence_report(&quantum, &OpticalScenario::optimal(&j)?, sl.hbar())?;
    print!("{}", report.to_table());
    println!("optimal frame: all rows pass = {}", report.all_pass);

    let half = OpticalScenario::new(&j, Some(0.5 * optimal_rotation(&j)?.phi_opt))?;
    let report = correspondence_report(&quantum, &half, sl.hbar())?;
    let failing: Vec<&str> = report.rows.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    println!("half the optimal rotation: failing rows {failing:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
