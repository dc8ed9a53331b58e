//! Control-link register layout, the controlled plaquette gates and the
//! stator unitary U built from global layers plus one exchange layer.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;
use crate::statevec::{check_engine_capacity, Axis, PauliString, QubitRegister, SingleQubitState};

use super::gates::{Gate, GateSeq, Target};

/// Register layout with links and controls: link l is qubit l, the control
/// of plaquette p is qubit `num_links + p`.
#[derive(Clone, Debug)]
pub struct FullLayout {
    geom: LatticeGeometry,
}

impl FullLayout {
    pub fn new(geom: &LatticeGeometry) -> Result<Self> {
        check_engine_capacity(geom.num_links() + geom.num_controls(), "full")?;
        Ok(Self { geom: geom.clone() })
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geom
    }

    pub fn num_links(&self) -> usize {
        self.geom.num_links()
    }

    pub fn num_controls(&self) -> usize {
        self.geom.num_controls()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_links() + self.num_controls()
    }

    pub fn control_qubit(&self, p: usize) -> usize {
        self.num_links() + p
    }

    pub fn control_qubits(&self) -> impl Iterator<Item = usize> {
        self.num_links()..self.num_qubits()
    }

    /// Bits of the link qubits.
    pub fn link_mask(&self) -> usize {
        (1usize << self.num_links()) - 1
    }

    /// Every (control qubit, link qubit) pair of a plaquette and one of its
    /// four links.
    pub fn nn_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.num_controls())
            .flat_map(|p| {
                let c = self.control_qubit(p);
                self.geom
                    .plaquette_links(p)
                    .expect("valid plaquette")
                    .map(move |l| (c, l))
            })
            .collect()
    }

    /// |in> on every control tensored with a link state.
    pub fn embed(&self, links: &QubitRegister) -> Result<QubitRegister> {
        if links.num_qubits() != self.num_links() {
            return Err(Error::SizeMismatch(links.num_qubits(), self.num_links()));
        }
        let nl = self.num_links();
        let k = 1usize << self.num_controls();
        let amp = (1.0 / k as f64).sqrt();
        let src = links.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); src.len() * k];
        for c in 0..k {
            for (b, a) in src.iter().enumerate() {
                out[b | c << nl] = a * amp;
            }
        }
        QubitRegister::from_amplitudes(out)
    }

    /// Link state conditioned on every control being |in>, with the squared
    /// norm of that component.
    pub fn extract_links(&self, full: &QubitRegister) -> Result<(QubitRegister, f64)> {
        if full.num_qubits() != self.num_qubits() {
            return Err(Error::SizeMismatch(full.num_qubits(), self.num_qubits()));
        }
        let nl = self.num_links();
        let k = 1usize << self.num_controls();
        let amp = (1.0 / k as f64).sqrt();
        let src = full.amplitudes();
        let mut links = vec![C64::new(0.0, 0.0); 1 << nl];
        for c in 0..k {
            for (b, l) in links.iter_mut().enumerate() {
                *l += src[b | c << nl] * amp;
            }
        }
        let weight: f64 = links.iter().map(|a| a.norm_sqr()).sum();
        if weight < 1e-300 {
            return Err(Error::ProjectionNull(weight));
        }
        let inv = 1.0 / weight.sqrt();
        links.iter_mut().for_each(|a| *a *= inv);
        Ok((QubitRegister::from_amplitudes(links)?, weight))
    }
}

/// The initial control state |in> = (|down> + |up>)/sqrt2.
pub fn control_in_state() -> SingleQubitState {
    SingleQubitState::plus()
}

/// Controlled flip of `link` by the control of plaquette `p`: identity when
/// the control is down, sigma_x on the link when it is up. Realized as
/// exp(-i pi/4 sz~ sx) exp(-i pi/4 sx) exp(+i pi/4 sz~), which equals the
/// controlled flip times e^{-i pi/4}.
pub fn controlled_plaquette_gate(
    layout: &FullLayout,
    p: usize,
    link: usize,
) -> Result<GateSeq> {
    let geom = layout.geometry();
    if !geom.plaquette_links(p)?.contains(&link) {
        return Err(Error::InvalidInput(format!(
            "link {link} is not on plaquette {p}"
        )));
    }
    let c = layout.control_qubit(p);
    let mut seq = GateSeq::new(layout.num_qubits());
    seq.push(Gate::Rotation {
        target: Target::Controls,
        axis: Axis::Z,
        angles: vec![(c, -FRAC_PI_4)],
    })?;
    seq.push(Gate::Rotation {
        target: Target::Links,
        axis: Axis::X,
        angles: vec![(link, FRAC_PI_4)],
    })?;
    seq.push(Gate::PauliRotation {
        pauli: PauliString::from_factors([(c, Axis::Z), (link, Axis::X)])?,
        angle: FRAC_PI_4,
    })?;
    Ok(seq)
}

/// Exchange pairs with their rotation angles.
pub type ExchangeLayer = Vec<(usize, usize, f64)>;

/// The ideal exchange layer: pi/4 on every nearest control-link pair.
pub fn ideal_exchange(layout: &FullLayout) -> ExchangeLayer {
    layout
        .nn_pairs()
        .into_iter()
        .map(|(c, l)| (c, l, FRAC_PI_4))
        .collect()
}

/// U as four global layers: V_x on links, Vy~(pi/4), the exchange layer,
/// Vy~(pi/4)^dag. The link layer angle is pi/4 per bordering plaquette.
pub fn build_u(geom: &LatticeGeometry) -> Result<GateSeq> {
    let layout = FullLayout::new(geom)?;
    build_u_with(&layout, ideal_exchange(&layout))
}

/// U with a caller-supplied exchange layer (residual couplings included).
pub fn build_u_with(layout: &FullLayout, exchange: ExchangeLayer) -> Result<GateSeq> {
    let geom = layout.geometry();
    let controls: Vec<usize> = layout.control_qubits().collect();
    let mut seq = GateSeq::new(layout.num_qubits());
    seq.push(Gate::Rotation {
        target: Target::Links,
        axis: Axis::X,
        angles: (0..geom.num_links())
            .map(|l| (l, FRAC_PI_4 * geom.link_plaquettes(l).len() as f64))
            .collect(),
    })?;
    seq.push(Gate::Rotation {
        target: Target::Controls,
        axis: Axis::Y,
        angles: controls.iter().map(|&c| (c, FRAC_PI_4)).collect(),
    })?;
    seq.push(Gate::Interaction { pairs: exchange })?;
    seq.push(Gate::Rotation {
        target: Target::Controls,
        axis: Axis::Y,
        angles: controls.iter().map(|&c| (c, -FRAC_PI_4)).collect(),
    })?;
    Ok(seq)
}

/// Product of all controlled plaquette gates, plaquette by plaquette in
/// the given order.
pub fn controlled_gate_product(layout: &FullLayout, order: &[usize]) -> Result<GateSeq> {
    let mut seq = GateSeq::new(layout.num_qubits());
    for &p in order {
        for l in layout.geometry().plaquette_links(p)? {
            seq.extend(&controlled_plaquette_gate(layout, p, l)?)?;
        }
    }
    Ok(seq)
}

/// || sx~(p) U (|in> x psi) - U (|in> x P psi) || for a link Pauli string P.
pub fn stator_deviation(
    layout: &FullLayout,
    u: &GateSeq,
    p: usize,
    links: &QubitRegister,
    op: &PauliString,
) -> Result<f64> {
    let mut lhs = layout.embed(links)?;
    u.apply(&mut lhs)?;
    lhs.apply_pauli_string(&PauliString::single(layout.control_qubit(p), Axis::X))?;
    let mut moved = links.clone();
    moved.apply_pauli_string(op)?;
    let mut rhs = layout.embed(&moved)?;
    u.apply(&mut rhs)?;
    lhs.distance(&rhs)
}

/// Largest violation of sx~(p) S = S B(p) over `trials` random link states.
pub fn stator_eigenoperator_check<R: Rng + ?Sized>(
    geom: &LatticeGeometry,
    p: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let layout = FullLayout::new(geom)?;
    let u = build_u(geom)?;
    let b = geom.plaquette_operator(p)?;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let psi = QubitRegister::random(geom.num_links(), rng)?;
        worst = worst.max(stator_deviation(&layout, &u, p, &psi, &b)?);
    }
    Ok(worst)
}

/// Result of the post-selected preparation of the magnetic ground state.
#[derive(Clone, Debug)]
pub struct MagneticPreparation {
    /// Full register after projection (controls in |+>).
    pub full: QubitRegister,
    pub links: QubitRegister,
    pub success_probability: f64,
}

/// Prepares |0_B> by applying U to |in>^Np x |0_E> and projecting each
/// control onto |+>.
pub fn prepare_magnetic_gs(geom: &LatticeGeometry) -> Result<MagneticPreparation> {
    let layout = FullLayout::new(geom)?;
    let mut seq = build_u(geom)?;
    for c in layout.control_qubits() {
        seq.push(Gate::Projector {
            qubit: c,
            axis: Axis::X,
            eigenvalue: 1,
        })?;
    }
    let mut full = layout.embed(&QubitRegister::zero(geom.num_links())?)?;
    let success_probability = seq.apply(&mut full)?;
    let (links, _) = layout.extract_links(&full)?;
    Ok(MagneticPreparation {
        full,
        links,
        success_probability,
    })
}

/// |0_B> on links by direct projection of |0_E> onto B(p) = +1.
pub fn magnetic_gs_links(geom: &LatticeGeometry) -> Result<QubitRegister> {
    let mut s = QubitRegister::zero(geom.num_links())?;
    for p in 0..geom.num_plaquettes() {
        s.apply_projector(&geom.plaquette_operator(p)?, 1)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn geom(lx: usize, ly: usize) -> LatticeGeometry {
        LatticeGeometry::new(lx, ly).unwrap()
    }

    #[test]
    fn controlled_gate_branches() {
        let g = geom(1, 1);
        let layout = FullLayout::new(&g).unwrap();
        let gate = controlled_plaquette_gate(&layout, 0, 2).unwrap();
        // control up (bit clear), link 2 up -> link 2 flipped
        let mut s = QubitRegister::zero(5).unwrap();
        gate.apply(&mut s).unwrap();
        assert!((s.amplitudes()[1 << 2].norm() - 1.0).abs() < 1e-14);
        // control down -> unchanged up to phase
        let mut s = QubitRegister::basis(5, 1 << 4).unwrap();
        gate.apply(&mut s).unwrap();
        assert!((s.amplitudes()[1 << 4].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wrong_link_rejected() {
        let g = geom(2, 1);
        let layout = FullLayout::new(&g).unwrap();
        let far = g.plaquette_links(1).unwrap()[1];
        assert!(controlled_plaquette_gate(&layout, 0, far).is_err());
    }

    #[test]
    fn embed_extract_round_trip() {
        let g = geom(1, 1);
        let layout = FullLayout::new(&g).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let psi = QubitRegister::random(4, &mut rng).unwrap();
        let full = layout.embed(&psi).unwrap();
        let (back, w) = layout.extract_links(&full).unwrap();
        assert!((w - 1.0).abs() < 1e-14);
        assert!(back.distance(&psi).unwrap() < 1e-14);
    }

    #[test]
    fn stator_identity_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert!(stator_eigenoperator_check(&geom(1, 1), 0, 5, &mut rng).unwrap() < 1e-12);
    }

    #[test]
    fn preparation_probability() {
        let prep = prepare_magnetic_gs(&geom(1, 1)).unwrap();
        assert!((prep.success_probability - 0.5).abs() < 1e-12);
        let direct = magnetic_gs_links(&geom(1, 1)).unwrap();
        assert!(prep.links.fidelity(&direct).unwrap() > 1.0 - 1e-12);
    }
}
