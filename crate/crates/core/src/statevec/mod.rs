//! Dense state-vector engine: qubit registers, Pauli strings and the kernels
//! that apply them.

pub mod dump;
mod pauli;
mod register;

pub use pauli::{Axis, PauliMasks, PauliString, Phase};
pub use register::{check_engine_capacity, QubitRegister, SingleQubitState, MAX_QUBITS};
