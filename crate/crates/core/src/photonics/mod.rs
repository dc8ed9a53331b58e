//! The physical interaction layer: coupling profiles, Zeeman-gradient
//! resonance selection, residual couplings and the error budget.

mod budget;
mod couplings;
mod profile;
mod resonance;

pub use budget::{error_budget, BudgetModel, BudgetResult};
pub use couplings::{
    effective_interaction, gauge_violation_run, gauge_violation_run_from,
    is_undesired_control_link, Coupling, CouplingMatrix, GaugeRun, PairClass, ResidualMode,
    DEFAULT_CUTOFF,
};
pub use profile::{coupling_profile, crystal_profile_raw, InteractionKind, InteractionModel};
pub use resonance::{
    atoms, canonical_nn_schedule, collision_report, collision_report_with_limit, is_nn_pair,
    resonant_pairs, zeeman_shift, Atom, AtomKind, Collision, CollisionReport, GradientSpec,
    PairResonance, Sideband, SidebandSchedule, DEFAULT_SCAN_LIMIT,
};
