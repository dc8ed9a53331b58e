//! Effective coupling matrices and their effect on the protocol.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;
use crate::protocol::{Engine, FullEngine, FullLayout, Schedule, Stator, WbMode};
use crate::statevec::QubitRegister;

use super::profile::{coupling_profile, InteractionModel};
use super::resonance::{is_nn_pair, resonant_pairs, GradientSpec, SidebandSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    DesiredNn,
    Residual,
}

/// How off-resonant pairs contribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualMode {
    /// Full J f(r): a worst-case bound.
    Bare,
    /// Second-order estimate (J f)^2 / delta, never above the bare value.
    Suppressed,
}

impl FromStr for ResidualMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bare" => Ok(Self::Bare),
            "suppressed" => Ok(Self::Suppressed),
            _ => Err(Error::InvalidInput(format!(
                "unknown residual mode `{s}` (expected bare or suppressed)"
            ))),
        }
    }
}

/// Off-resonant pairs with delta / (J f) above this are dropped.
pub const DEFAULT_CUTOFF: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub a: usize,
    pub b: usize,
    pub strength: f64,
    pub class: PairClass,
}

/// Symmetric coupling matrix over atoms (links, then controls), stored as
/// its nonzero upper-triangle entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    num_links: usize,
    num_atoms: usize,
    j: f64,
    entries: Vec<Coupling>,
}

impl CouplingMatrix {
    pub fn empty(geom: &LatticeGeometry, j: f64) -> Self {
        Self {
            num_links: geom.num_links(),
            num_atoms: geom.num_links() + geom.num_controls(),
            j,
            entries: Vec::new(),
        }
    }

    /// J on every NN control-link pair and nothing else.
    pub fn ideal(geom: &LatticeGeometry, j: f64) -> Self {
        let mut m = Self::empty(geom, j);
        let nl = geom.num_links();
        for p in 0..geom.num_plaquettes() {
            for l in geom.plaquette_links(p).expect("valid plaquette") {
                m.entries.push(Coupling {
                    a: l,
                    b: nl + p,
                    strength: j,
                    class: PairClass::DesiredNn,
                });
            }
        }
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        for e in &mut self.entries {
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
        }
        self.entries.sort_by_key(|e| (e.a, e.b));
    }

    /// Adds (or overwrites) a residual coupling.
    pub fn set_residual(&mut self, a: usize, b: usize, strength: f64) -> Result<()> {
        if a == b {
            return Err(Error::InvalidInput(format!("self-coupling on atom {a}")));
        }
        for &i in &[a, b] {
            if i >= self.num_atoms {
                return Err(Error::OutOfRange {
                    what: "atom",
                    index: i,
                    size: self.num_atoms,
                });
            }
        }
        let (a, b) = (a.min(b), a.max(b));
        self.entries.retain(|e| (e.a, e.b) != (a, b));
        if strength != 0.0 {
            self.entries.push(Coupling {
                a,
                b,
                strength,
                class: PairClass::Residual,
            });
        }
        self.normalize();
        Ok(())
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn entries(&self) -> &[Coupling] {
        &self.entries
    }

    pub fn strength(&self, a: usize, b: usize) -> f64 {
        let (a, b) = (a.min(b), a.max(b));
        self.entries
            .iter()
            .find(|e| (e.a, e.b) == (a, b))
            .map_or(0.0, |e| e.strength)
    }

    pub fn class(&self, a: usize, b: usize) -> Option<PairClass> {
        let (a, b) = (a.min(b), a.max(b));
        self.entries
            .iter()
            .find(|e| (e.a, e.b) == (a, b))
            .map(|e| e.class)
    }

    pub fn residuals(&self) -> impl Iterator<Item = &Coupling> {
        self.entries.iter().filter(|e| e.class == PairClass::Residual)
    }

    /// Dense row-major matrix.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.num_atoms;
        let mut m = vec![0.0; n * n];
        for e in &self.entries {
            m[e.a * n + e.b] = e.strength;
            m[e.b * n + e.a] = e.strength;
        }
        m
    }

    /// Exchange layer for the stator: each pair rotated by (pi/4) s / J.
    pub fn exchange_layer(&self) -> Vec<(usize, usize, f64)> {
        self.entries
            .iter()
            .map(|e| (e.a, e.b, FRAC_PI_4 * e.strength / self.j))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,kind_a,kind_b,strength,class\n");
        let kind = |i: usize| if i < self.num_links { "link" } else { "control" };
        for e in &self.entries {
            let class = match e.class {
                PairClass::DesiredNn => "desired",
                PairClass::Residual => "residual",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{:.17e},{}",
                e.a,
                e.b,
                kind(e.a),
                kind(e.b),
                e.strength,
                class
            );
        }
        out
    }
}

/// Couplings produced by a sideband schedule.
pub fn effective_interaction(
    model: &InteractionModel,
    geom: &LatticeGeometry,
    grad: &GradientSpec,
    schedule: &SidebandSchedule,
    resolution: f64,
    mode: ResidualMode,
    cutoff: f64,
) -> Result<CouplingMatrix> {
    model.validate()?;
    let mut m = CouplingMatrix::empty(geom, model.j);
    for pr in resonant_pairs(geom, grad, schedule, resolution) {
        let jf = model.j * coupling_profile(model, pr.distance)?;
        if jf == 0.0 {
            continue;
        }
        let strength = if pr.resonant {
            jf
        } else if pr.mismatch / jf > cutoff {
            0.0
        } else {
            match mode {
                ResidualMode::Bare => jf,
                ResidualMode::Suppressed => (jf * jf / pr.mismatch).min(jf),
            }
        };
        if strength != 0.0 {
            m.entries.push(Coupling {
                a: pr.a,
                b: pr.b,
                strength,
                class: if pr.resonant && pr.nn {
                    PairClass::DesiredNn
                } else {
                    PairClass::Residual
                },
            });
        }
    }
    m.normalize();
    Ok(m)
}

/// Gauge errors along a protocol run with a given coupling matrix.
#[derive(Clone, Debug)]
pub struct GaugeRun {
    /// 1 - <A(x)> per site, for the initial state and after every step.
    pub per_step: Vec<Vec<f64>>,
    pub final_state: QubitRegister,
}

impl GaugeRun {
    /// Max over sites, per step.
    pub fn max_per_step(&self) -> Vec<f64> {
        self.per_step
            .iter()
            .map(|s| s.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .collect()
    }

    pub fn max(&self) -> f64 {
        self.max_per_step().into_iter().fold(0.0, f64::max)
    }
}

/// Runs the full engine with W_B built from `coupling` and records the
/// gauge errors after every step.
pub fn gauge_violation_run(
    geom: &LatticeGeometry,
    coupling: &CouplingMatrix,
    schedule: &Schedule,
) -> Result<GaugeRun> {
    gauge_violation_run_from(geom, coupling, schedule, None)
}

/// As `gauge_violation_run`, starting from a given full register instead of
/// the schedule's initial state.
pub fn gauge_violation_run_from(
    geom: &LatticeGeometry,
    coupling: &CouplingMatrix,
    schedule: &Schedule,
    initial: Option<QubitRegister>,
) -> Result<GaugeRun> {
    schedule.validate()?;
    let layout = FullLayout::new(geom)?;
    if coupling.num_atoms() != layout.num_qubits() {
        return Err(Error::SizeMismatch(coupling.num_atoms(), layout.num_qubits()));
    }
    let stator = Stator::with_exchange(layout, coupling.exchange_layer())?;
    let mut engine = FullEngine::with_stator(stator, WbMode::Stator)?;
    match initial {
        Some(s) => engine.set_state(s)?,
        None => engine.reset(schedule.direction.initial_state())?,
    }
    let tau = schedule.signed_tau();
    let mut per_step = vec![engine.gauge_violations()?];
    for k in 0..schedule.steps {
        let (le, lb) = schedule.step_couplings(k);
        engine.trotter_step(le, lb, tau, schedule.order)?;
        per_step.push(engine.gauge_violations()?);
    }
    Ok(GaugeRun {
        per_step,
        final_state: engine.state().clone(),
    })
}

/// Whether (a, b) is a control-link pair that is not nearest neighbour.
pub fn is_undesired_control_link(geom: &LatticeGeometry, a: usize, b: usize) -> bool {
    let nl = geom.num_links();
    ((a >= nl) != (b >= nl)) && !is_nn_pair(geom, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::photonics::resonance::canonical_nn_schedule;

    #[test]
    fn ideal_matrix_shape() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        let m = CouplingMatrix::ideal(&g, 1.0);
        assert_eq!(m.entries().len(), 16);
        let d = m.dense();
        let n = m.num_atoms();
        for i in 0..n {
            assert_eq!(d[i * n + i], 0.0);
            for k in 0..n {
                assert_eq!(d[i * n + k], d[k * n + i]);
            }
        }
    }

    #[test]
    fn infinite_gradient_gives_ideal() {
        let g = LatticeGeometry::new(2, 2).unwrap();
        let grad = GradientSpec::new(1.0, 2f64.sqrt(), 1e9).unwrap();
        let s = canonical_nn_schedule(&grad, 1e-6).unwrap();
        let model = InteractionModel::cavity(1.0, 10.0).unwrap();
        let m = effective_interaction(&model, &g, &grad, &s, 1e-6, ResidualMode::Suppressed, DEFAULT_CUTOFF)
            .unwrap();
        assert_eq!(m, CouplingMatrix::ideal(&g, 1.0));
    }

    #[test]
    fn residual_editing() {
        let g = LatticeGeometry::new(1, 1).unwrap();
        let mut m = CouplingMatrix::ideal(&g, 2.0);
        m.set_residual(1, 0, 0.5).unwrap();
        assert_eq!(m.strength(0, 1), 0.5);
        assert_eq!(m.class(1, 0), Some(PairClass::Residual));
        assert!(m.set_residual(2, 2, 1.0).is_err());
        m.set_residual(0, 1, 0.0).unwrap();
        assert_eq!(m.entries().len(), 4);
    }
}
