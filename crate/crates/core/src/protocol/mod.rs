//! The stroboscopic protocol: stator construction, Trotter steps, adiabatic
//! ramps, magnetic ground-state preparation and Wilson-loop readout.

mod engine;
mod gates;
mod reference;
mod schedule;
mod stator;
mod wilson;

pub use engine::{
    make_engine, step_wb_ideal, step_we, DualEngine, Engine, EngineKind, FullEngine,
    InitialState, LinksEngine, Stator, WbMode,
};
pub use gates::{Gate, GateSeq, Target};
pub use reference::{exact_point, trotter_error_scan, ExactPoint, TrotterErrorPoint};
pub use schedule::{
    adiabatic_sweep, run_adiabatic, run_from_current, Direction, Observables, SampleTime,
    Schedule, SignConvention, StepRecord, Trajectory,
};
pub use stator::{
    build_u, build_u_with, control_in_state, controlled_gate_product, controlled_plaquette_gate,
    ideal_exchange, magnetic_gs_links, prepare_magnetic_gs, stator_deviation,
    stator_eigenoperator_check, ExchangeLayer, FullLayout, MagneticPreparation,
};
pub use wilson::{
    compose_loops, measure_wilson_stator, ControlGroup, LoopProduct, WilsonPlan,
};
