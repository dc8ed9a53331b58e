//! Exact classical emulation of a stroboscopic, photon-mediated quantum
//! simulator for the 2+1d Z2 lattice gauge theory.
//!
//! Three engines share one protocol layer:
//!
//! * **full**: links and controls in one dense register; the magnetic step
//!   runs through the stator sequence `U^dag V~_x U`;
//! * **links**: links only; plaquette terms applied as four-body rotations;
//! * **dual**: the gauge-invariant sector as plaquette spins (transverse-field
//!   Ising form), used for lattices too large for the dense engines.

pub mod analysis;
pub mod error;
pub mod gauge_dual;
pub mod lattice;
pub mod photonics;
pub mod protocol;
pub mod statevec;

pub use error::{Error, Result};
pub use lattice::{LatticeGeometry, LoopSpec};
pub use statevec::{Axis, PauliString, QubitRegister};
