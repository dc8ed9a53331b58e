//! Exact references: ground-state observables and the exact propagator
//! used to measure Trotter errors.

use std::sync::Arc;

use crate::error::Result;
use crate::gauge_dual::{
    evolve_exact, exact_ground_state, trotter_step_dual, wilson_expectation_dual,
    DualHamiltonian, DualStructure, TrotterOrder,
};
use crate::lattice::LoopSpec;
use crate::statevec::QubitRegister;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactPoint {
    pub lambda_e: f64,
    pub lambda_b: f64,
    pub energy: f64,
    pub wilson: Vec<f64>,
}

/// Ground-state energy and Wilson loops at fixed couplings.
pub fn exact_point(
    structure: &Arc<DualStructure>,
    lambda_e: f64,
    lambda_b: f64,
    loops: &[LoopSpec],
) -> Result<ExactPoint> {
    let h = DualHamiltonian::new(structure.clone(), lambda_e, lambda_b);
    let gs = exact_ground_state(&h)?;
    let wilson = loops
        .iter()
        .map(|c| wilson_expectation_dual(&gs.state, structure.geometry(), c))
        .collect::<Result<_>>()?;
    Ok(ExactPoint {
        lambda_e,
        lambda_b,
        energy: gs.energy,
        wilson,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterErrorPoint {
    pub steps: usize,
    /// || psi_Trotter(T) - exp(-i H T) psi(0) ||
    pub error: f64,
}

/// Global Trotter error at fixed couplings and total time, starting from
/// |0_E>, for each step count.
pub fn trotter_error_scan(
    structure: &Arc<DualStructure>,
    lambda_e: f64,
    lambda_b: f64,
    total_time: f64,
    steps: &[usize],
    order: TrotterOrder,
) -> Result<Vec<TrotterErrorPoint>> {
    let h = DualHamiltonian::new(structure.clone(), lambda_e, lambda_b);
    let psi0 = QubitRegister::zero(structure.num_spins())?;
    let exact = evolve_exact(&h, &psi0, total_time)?;
    steps
        .iter()
        .map(|&m| {
            let tau = total_time / m as f64;
            let mut psi = psi0.clone();
            for _ in 0..m {
                trotter_step_dual(&mut psi, structure, lambda_e, lambda_b, tau, order)?;
            }
            Ok(TrotterErrorPoint {
                steps: m,
                error: psi.distance(&exact)?,
            })
        })
        .collect()
}
