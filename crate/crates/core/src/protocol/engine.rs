//! Three interchangeable engines for the same dynamics:
//!
//! * `Full`: links and controls; W_B goes through the stator.
//! * `Links`: links only; W_B applies the plaquette rotations directly.
//! * `Dual`: one spin per plaquette, restricted to the A(x) = +1 sector.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gauge_dual::{
    self, electric_step_dual, magnetic_step_dual, DualHamiltonian, DualStructure, TrotterOrder,
};
use crate::lattice::{LatticeGeometry, LoopSpec};
use crate::statevec::{check_engine_capacity, Axis, PauliString, QubitRegister, MAX_QUBITS};

use super::gates::GateSeq;
use super::stator::{
    build_u_with, ideal_exchange, magnetic_gs_links, prepare_magnetic_gs, ExchangeLayer,
    FullLayout,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Full,
    Links,
    Dual,
}

impl EngineKind {
    /// The most detailed engine whose register fits: full, then links, then
    /// dual.
    pub fn select(geom: &LatticeGeometry) -> Result<Self> {
        let nl = geom.num_links();
        if nl + geom.num_controls() <= MAX_QUBITS {
            Ok(Self::Full)
        } else if nl <= MAX_QUBITS {
            Ok(Self::Links)
        } else {
            DualStructure::new(geom)?;
            Ok(Self::Dual)
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::Links => "links",
            Self::Dual => "dual",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "links" => Ok(Self::Links),
            "dual" => Ok(Self::Dual),
            _ => Err(Error::InvalidInput(format!(
                "unknown engine `{s}` (expected full, links or dual)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialState {
    /// |0_E>: all links up.
    Electric,
    /// |0_B>: the +1 eigenstate of every B(x) in the A = +1 sector.
    Magnetic,
}

/// W_E(tau) = exp(i tau lambda_E sum_l sigma_z(l)) on the first `num_links`
/// qubits of a register.
pub fn step_we(state: &mut QubitRegister, num_links: usize, lambda_e: f64, tau: f64) {
    if lambda_e == 0.0 || tau == 0.0 {
        return;
    }
    let a = tau * lambda_e;
    let mask = (1usize << num_links) - 1;
    // exp(i a (n - 2 k)) for k links down
    let table: Vec<C64> = (0..=num_links)
        .map(|k| C64::from_polar(1.0, a * (num_links as f64 - 2.0 * k as f64)))
        .collect();
    state.map_diagonal(|b, amp| table[(b & mask).count_ones() as usize] * amp);
}

/// W_B(tau) = exp(i tau lambda_B sum_p B(p)) applied directly to the links.
pub fn step_wb_ideal(
    state: &mut QubitRegister,
    geom: &LatticeGeometry,
    lambda_b: f64,
    tau: f64,
) -> Result<()> {
    if lambda_b == 0.0 || tau == 0.0 {
        return Ok(());
    }
    for p in 0..geom.num_plaquettes() {
        state.apply_pauli_rotation(&geom.plaquette_operator(p)?, -tau * lambda_b)?;
    }
    Ok(())
}

/// The stator unitary U and its inverse for one geometry.
#[derive(Clone, Debug)]
pub struct Stator {
    layout: FullLayout,
    u: GateSeq,
    u_dag: GateSeq,
}

impl Stator {
    pub fn ideal(geom: &LatticeGeometry) -> Result<Self> {
        let layout = FullLayout::new(geom)?;
        let exchange = ideal_exchange(&layout);
        Self::with_exchange(layout, exchange)
    }

    pub fn with_exchange(layout: FullLayout, exchange: ExchangeLayer) -> Result<Self> {
        let u = build_u_with(&layout, exchange)?;
        let u_dag = u.inverse()?;
        Ok(Self { layout, u, u_dag })
    }

    pub fn layout(&self) -> &FullLayout {
        &self.layout
    }

    pub fn u(&self) -> &GateSeq {
        &self.u
    }

    /// W_B = U^dag Vx~(-tau lambda_B) U, i.e. exp(i tau lambda_B sum sx~) in
    /// the stator frame.
    pub fn step_wb(&self, state: &mut QubitRegister, lambda_b: f64, tau: f64) -> Result<()> {
        if lambda_b == 0.0 || tau == 0.0 {
            return Ok(());
        }
        self.u.apply(state)?;
        for c in self.layout.control_qubits() {
            state.apply_pauli_rotation(&PauliString::single(c, Axis::X), -tau * lambda_b)?;
        }
        self.u_dag.apply(state)?;
        Ok(())
    }
}

/// How the full engine realizes W_B.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WbMode {
    Stator,
    Ideal,
}

/// Common interface of the three engines.
pub trait Engine: Send {
    fn kind(&self) -> EngineKind;
    fn geometry(&self) -> &LatticeGeometry;
    fn reset(&mut self, init: InitialState) -> Result<()>;
    /// Loads a link state (which must lie in the A = +1 sector for the dual
    /// engine).
    fn set_links(&mut self, links: &QubitRegister) -> Result<()>;
    /// The current state as a link register.
    fn link_state(&self) -> Result<QubitRegister>;
    fn electric_step(&mut self, lambda_e: f64, tau: f64) -> Result<()>;
    fn magnetic_step(&mut self, lambda_b: f64, tau: f64) -> Result<()>;
    fn wilson(&self, c: &LoopSpec) -> Result<f64>;
    /// <H> for H = -lambda_E sum sigma_z - lambda_B sum B.
    fn energy(&self, lambda_e: f64, lambda_b: f64) -> Result<f64>;
    /// 1 - <A(x)> for every site.
    fn gauge_violations(&self) -> Result<Vec<f64>>;

    /// W_E W_B (first order) or W_E(tau/2) W_B(tau) W_E(tau/2).
    fn trotter_step(
        &mut self,
        lambda_e: f64,
        lambda_b: f64,
        tau: f64,
        order: TrotterOrder,
    ) -> Result<()> {
        match order {
            TrotterOrder::First => {
                self.magnetic_step(lambda_b, tau)?;
                self.electric_step(lambda_e, tau)
            }
            TrotterOrder::Second => {
                self.electric_step(lambda_e, tau / 2.0)?;
                self.magnetic_step(lambda_b, tau)?;
                self.electric_step(lambda_e, tau / 2.0)
            }
        }
    }

    fn max_gauge_violation(&self) -> Result<f64> {
        Ok(self
            .gauge_violations()?
            .into_iter()
            .fold(0.0f64, |m, v| m.max(v.abs())))
    }
}

fn star_masks(geom: &LatticeGeometry) -> Result<Vec<u64>> {
    (0..geom.num_sites()).map(|s| geom.star_mask(s)).collect()
}

fn register_energy(
    state: &QubitRegister,
    geom: &LatticeGeometry,
    lambda_e: f64,
    lambda_b: f64,
) -> Result<f64> {
    let masks: Vec<u64> = (0..geom.num_links()).map(|l| 1u64 << l).collect();
    let ez: f64 = state.expectation_parities(&masks).iter().sum();
    let mut eb = 0.0;
    if lambda_b != 0.0 {
        for p in 0..geom.num_plaquettes() {
            eb += state.expectation_pauli(&geom.plaquette_operator(p)?)?;
        }
    }
    Ok(-lambda_e * ez - lambda_b * eb)
}

fn register_gauge(state: &QubitRegister, masks: &[u64]) -> Vec<f64> {
    state
        .expectation_parities(masks)
        .into_iter()
        .map(|a| 1.0 - a)
        .collect()
}

/// Links and controls; the controls start in |in> and return there after
/// every W_B.
pub struct FullEngine {
    stator: Stator,
    mode: WbMode,
    stars: Vec<u64>,
    state: QubitRegister,
}

impl FullEngine {
    pub fn new(geom: &LatticeGeometry) -> Result<Self> {
        Self::with_stator(Stator::ideal(geom)?, WbMode::Stator)
    }

    pub fn with_stator(stator: Stator, mode: WbMode) -> Result<Self> {
        let geom = stator.layout().geometry().clone();
        let state = stator
            .layout()
            .embed(&QubitRegister::zero(geom.num_links())?)?;
        Ok(Self {
            stars: star_masks(&geom)?,
            stator,
            mode,
            state,
        })
    }

    pub fn layout(&self) -> &FullLayout {
        self.stator.layout()
    }

    pub fn state(&self) -> &QubitRegister {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut QubitRegister {
        &mut self.state
    }

    pub fn set_state(&mut self, state: QubitRegister) -> Result<()> {
        if state.num_qubits() != self.layout().num_qubits() {
            return Err(Error::SizeMismatch(state.num_qubits(), self.layout().num_qubits()));
        }
        self.state = state;
        Ok(())
    }
}

impl Engine for FullEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Full
    }

    fn geometry(&self) -> &LatticeGeometry {
        self.stator.layout().geometry()
    }

    fn reset(&mut self, init: InitialState) -> Result<()> {
        self.state = match init {
            InitialState::Electric => self
                .layout()
                .embed(&QubitRegister::zero(self.layout().num_links())?)?,
            InitialState::Magnetic => prepare_magnetic_gs(self.geometry())?.full,
        };
        Ok(())
    }

    fn set_links(&mut self, links: &QubitRegister) -> Result<()> {
        self.state = self.layout().embed(links)?;
        Ok(())
    }

    fn link_state(&self) -> Result<QubitRegister> {
        let (links, weight) = self.layout().extract_links(&self.state)?;
        if (weight - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidInput(format!(
                "controls are not in |in> (overlap {weight:.3e})"
            )));
        }
        Ok(links)
    }

    fn electric_step(&mut self, lambda_e: f64, tau: f64) -> Result<()> {
        let nl = self.layout().num_links();
        step_we(&mut self.state, nl, lambda_e, tau);
        Ok(())
    }

    fn magnetic_step(&mut self, lambda_b: f64, tau: f64) -> Result<()> {
        match self.mode {
            WbMode::Stator => self.stator.step_wb(&mut self.state, lambda_b, tau),
            WbMode::Ideal => {
                step_wb_ideal(&mut self.state, self.stator.layout().geometry(), lambda_b, tau)
            }
        }
    }

    fn wilson(&self, c: &LoopSpec) -> Result<f64> {
        self.state
            .expectation_pauli(&self.geometry().loop_operator(c)?)
    }

    fn energy(&self, lambda_e: f64, lambda_b: f64) -> Result<f64> {
        register_energy(&self.state, self.geometry(), lambda_e, lambda_b)
    }

    fn gauge_violations(&self) -> Result<Vec<f64>> {
        Ok(register_gauge(&self.state, &self.stars))
    }
}

/// Links only.
pub struct LinksEngine {
    geom: LatticeGeometry,
    stars: Vec<u64>,
    state: QubitRegister,
}

impl LinksEngine {
    pub fn new(geom: &LatticeGeometry) -> Result<Self> {
        check_engine_capacity(geom.num_links(), "links")?;
        Ok(Self {
            geom: geom.clone(),
            stars: star_masks(geom)?,
            state: QubitRegister::zero(geom.num_links())?,
        })
    }

    pub fn state(&self) -> &QubitRegister {
        &self.state
    }
}

impl Engine for LinksEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Links
    }

    fn geometry(&self) -> &LatticeGeometry {
        &self.geom
    }

    fn reset(&mut self, init: InitialState) -> Result<()> {
        self.state = match init {
            InitialState::Electric => QubitRegister::zero(self.geom.num_links())?,
            InitialState::Magnetic => magnetic_gs_links(&self.geom)?,
        };
        Ok(())
    }

    fn set_links(&mut self, links: &QubitRegister) -> Result<()> {
        if links.num_qubits() != self.geom.num_links() {
            return Err(Error::SizeMismatch(links.num_qubits(), self.geom.num_links()));
        }
        self.state = links.clone();
        Ok(())
    }

    fn link_state(&self) -> Result<QubitRegister> {
        Ok(self.state.clone())
    }

    fn electric_step(&mut self, lambda_e: f64, tau: f64) -> Result<()> {
        step_we(&mut self.state, self.geom.num_links(), lambda_e, tau);
        Ok(())
    }

    fn magnetic_step(&mut self, lambda_b: f64, tau: f64) -> Result<()> {
        step_wb_ideal(&mut self.state, &self.geom, lambda_b, tau)
    }

    fn wilson(&self, c: &LoopSpec) -> Result<f64> {
        self.state.expectation_pauli(&self.geom.loop_operator(c)?)
    }

    fn energy(&self, lambda_e: f64, lambda_b: f64) -> Result<f64> {
        register_energy(&self.state, &self.geom, lambda_e, lambda_b)
    }

    fn gauge_violations(&self) -> Result<Vec<f64>> {
        Ok(register_gauge(&self.state, &self.stars))
    }
}

/// Plaquette spins.
pub struct DualEngine {
    structure: Arc<DualStructure>,
    state: QubitRegister,
}

impl DualEngine {
    pub fn new(geom: &LatticeGeometry) -> Result<Self> {
        Self::with_structure(Arc::new(DualStructure::new(geom)?))
    }

    pub fn with_structure(structure: Arc<DualStructure>) -> Result<Self> {
        let state = QubitRegister::zero(structure.num_spins())?;
        Ok(Self { structure, state })
    }

    pub fn state(&self) -> &QubitRegister {
        &self.state
    }

    pub fn set_state(&mut self, state: QubitRegister) -> Result<()> {
        if state.num_qubits() != self.structure.num_spins() {
            return Err(Error::SizeMismatch(state.num_qubits(), self.structure.num_spins()));
        }
        self.state = state;
        Ok(())
    }
}

impl Engine for DualEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Dual
    }

    fn geometry(&self) -> &LatticeGeometry {
        self.structure.geometry()
    }

    fn reset(&mut self, init: InitialState) -> Result<()> {
        let n = self.structure.num_spins();
        self.state = match init {
            InitialState::Electric => QubitRegister::zero(n)?,
            InitialState::Magnetic => gauge_dual::magnetic_ground_state_dual(n)?,
        };
        Ok(())
    }

    fn set_links(&mut self, links: &QubitRegister) -> Result<()> {
        self.state = gauge_dual::links_to_dual(&self.structure, links)?;
        Ok(())
    }

    fn link_state(&self) -> Result<QubitRegister> {
        gauge_dual::dual_to_links(&self.structure, &self.state)
    }

    fn electric_step(&mut self, lambda_e: f64, tau: f64) -> Result<()> {
        electric_step_dual(&mut self.state, &self.structure, lambda_e, tau);
        Ok(())
    }

    fn magnetic_step(&mut self, lambda_b: f64, tau: f64) -> Result<()> {
        magnetic_step_dual(&mut self.state, lambda_b, tau);
        Ok(())
    }

    fn wilson(&self, c: &LoopSpec) -> Result<f64> {
        gauge_dual::wilson_expectation_dual(&self.state, self.geometry(), c)
    }

    fn energy(&self, lambda_e: f64, lambda_b: f64) -> Result<f64> {
        DualHamiltonian::new(self.structure.clone(), lambda_e, lambda_b).energy(&self.state)
    }

    fn gauge_violations(&self) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.geometry().num_sites()])
    }
}

/// Builds an engine of the requested kind.
pub fn make_engine(kind: EngineKind, geom: &LatticeGeometry) -> Result<Box<dyn Engine>> {
    Ok(match kind {
        EngineKind::Full => Box::new(FullEngine::new(geom)?),
        EngineKind::Links => Box::new(LinksEngine::new(geom)?),
        EngineKind::Dual => Box::new(DualEngine::new(geom)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn geom(lx: usize, ly: usize) -> LatticeGeometry {
        LatticeGeometry::new(lx, ly).unwrap()
    }

    #[test]
    fn selection_by_capacity() {
        assert_eq!(EngineKind::select(&geom(2, 2)).unwrap(), EngineKind::Full);
        assert_eq!(EngineKind::select(&geom(3, 3)).unwrap(), EngineKind::Links);
        assert_eq!(EngineKind::select(&geom(4, 4)).unwrap(), EngineKind::Dual);
        assert_eq!("links".parse::<EngineKind>().unwrap(), EngineKind::Links);
        assert!("tier-a".parse::<EngineKind>().is_err());
    }

    #[test]
    fn engines_agree_on_one_step() {
        let g = geom(1, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let dual = QubitRegister::random(g.num_plaquettes(), &mut rng).unwrap();
        let s = DualStructure::new(&g).unwrap();
        let links = gauge_dual::dual_to_links(&s, &dual).unwrap();
        let mut engines: Vec<Box<dyn Engine>> = [EngineKind::Full, EngineKind::Links, EngineKind::Dual]
            .into_iter()
            .map(|k| make_engine(k, &g).unwrap())
            .collect();
        for e in engines.iter_mut() {
            e.set_links(&links).unwrap();
            e.trotter_step(0.8, 1.3, 0.21, TrotterOrder::Second).unwrap();
        }
        let reference = engines[1].link_state().unwrap();
        for e in &engines {
            let d = e.link_state().unwrap().distance(&reference).unwrap();
            assert!(d < 1e-12, "{} differs by {d}", e.kind());
            assert!(e.max_gauge_violation().unwrap() < 1e-12);
        }
    }

    #[test]
    fn electric_step_phase_only() {
        let g = geom(2, 1);
        let mut e = LinksEngine::new(&g).unwrap();
        e.electric_step(1.0, 0.3).unwrap();
        assert!((e.state().amplitudes()[0].norm() - 1.0).abs() < 1e-14);
    }
}
