// Time-optimal Hamiltonians between two qubit states, both synthesis routes.

use std::error::Error;

use bloch_poincare::bloch::{bloch_vector, fidelity};
use bloch_poincare::numerics::ComplexVec2;
use bloch_poincare::speed_limit::efficiency;
use bloch_poincare::{QuantumState, SpeedLimit};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sl = SpeedLimit::new(1.0)?;
    let a = QuantumState::ground();
    let b = QuantumState::normalize(ComplexVec2::new(
        Complex64::new(0.6, 0.2),
        Complex64::from_polar(0.7, -1.1),
    ))?;

    let e0 = 2.0;
    let fast = sl.synthesize_min_time(&a, &b, e0)?;
    let h = fast.hamiltonian;
    println!("fixed gap E0 = {e0}");
    println!("  h11 = {:.6}, h22 = {:.6}, |h12| = {:.6}", h.h11(), h.h22(), h.h12().norm());
    println!("  t_min = {:.8}, endpoint fidelity = {:.12}", fast.t_min, fast.endpoint_fidelity);

    let c = QuantumState::normalize(ComplexVec2::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.9)))?;
    let e = 0.75;
    let geo = sl.synthesize_max_uncertainty(&c, &b, e)?;
    println!("fixed uncertainty E = {e}, arbitrary start");
    println!("  Delta E = {:.6}, t_min = {:.8}", geo.delta_e, geo.t_min);
    assert!((geo.t_min * geo.delta_e - 0.5 * geo.theta_ab).abs() < 1e-10);

    let path: Vec<QuantumState> = sl.geodesic_trajectory(&c, &b, e, 21)?.into_iter().map(|(_, s)| s).collect();
    let eta = efficiency(&path)?;
    println!("  sampled path: s0 = {:.6}, s = {:.6}, eta = {:.9}", eta.s0, eta.s, eta.eta_qm);

    let end = sl.evolve(geo.hamiltonian.matrix(), &c, geo.t_min)?;
    let [x, y, z] = bloch_vector(&end);
    println!("  end point ({x:.4}, {y:.4}, {z:.4}), fidelity {:.12}", fidelity(&end, &b));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
