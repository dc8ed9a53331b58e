//! Plaquette-spin (dual transverse-field Ising) representation of the
//! gauge sector A(x) = +1.
//!
//! One dual spin per plaquette. The map is
//!
//! * sigma_z(interior link) -> tau_z(p) tau_z(p') for its two plaquettes,
//! * sigma_z(boundary link) -> tau_z(p),
//! * B(p) -> tau_x(p),
//!
//! with |0_E> (all links up) mapped to all dual spins up. Dual basis state
//! `b` corresponds to the link basis state obtained by applying B(p) to
//! |0_E> for every set bit p of `b`.

pub mod lanczos;

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::{LatticeGeometry, LoopSpec};
use crate::statevec::{Axis, PauliString, QubitRegister};
use lanczos::{EigenPair, LanczosConfig, SymmetricOperator};

/// Default dimension cap for the dual engine.
pub const DEFAULT_DIM_CAP: usize = 1 << 25;

/// Dimensions at or below this are diagonalized densely.
pub const DENSE_LIMIT: usize = 1 << 10;

/// Couplings-independent structure of the dual model.
#[derive(Debug)]
pub struct DualStructure {
    geometry: LatticeGeometry,
    pairs: Vec<(usize, usize)>,
    singles: Vec<usize>,
    /// Sum over links of the dual image of sigma_z, per dual basis state.
    electric: Vec<i16>,
    /// Link flip pattern B(p) as a bit mask over links, per plaquette.
    flip_masks: Vec<u64>,
}

impl DualStructure {
    pub fn new(geometry: &LatticeGeometry) -> Result<Self> {
        Self::with_cap(geometry, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(geometry: &LatticeGeometry, dim_cap: usize) -> Result<Self> {
        let np = geometry.num_plaquettes();
        if np >= usize::BITS as usize - 1 || (1usize << np) > dim_cap {
            return Err(Error::Capacity {
                engine: "dual",
                requested: np,
                max: dim_cap.trailing_zeros() as usize,
                hint: "reduce the lattice size",
            });
        }
        let mut pairs = Vec::new();
        let mut singles = Vec::new();
        for l in 0..geometry.num_links() {
            match *geometry.link_plaquettes(l) {
                [p] => singles.push(p),
                [p, q] => pairs.push((p, q)),
                _ => unreachable!("link borders one or two plaquettes"),
            }
        }
        let masks: Vec<u64> = pairs
            .iter()
            .map(|&(p, q)| (1u64 << p) | (1u64 << q))
            .chain(singles.iter().map(|&p| 1u64 << p))
            .collect();
        let electric = (0..1u64 << np)
            .map(|b| {
                masks
                    .iter()
                    .map(|m| if (b & m).count_ones() % 2 == 0 { 1i16 } else { -1 })
                    .sum()
            })
            .collect();
        let flip_masks = if geometry.num_links() <= 64 {
            (0..np)
                .map(|p| {
                    geometry
                        .plaquette_links(p)
                        .expect("valid plaquette")
                        .iter()
                        .map(|&l| 1u64 << l)
                        .sum()
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            geometry: geometry.clone(),
            pairs,
            singles,
            electric,
            flip_masks,
        })
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn num_spins(&self) -> usize {
        self.geometry.num_plaquettes()
    }

    pub fn dim(&self) -> usize {
        1 << self.num_spins()
    }

    /// Interior links as plaquette pairs.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Boundary links as their single plaquette.
    pub fn singles(&self) -> &[usize] {
        &self.singles
    }

    /// Eigenvalue of sum_links sigma_z on dual basis state `b`.
    pub fn electric_count(&self, b: usize) -> i16 {
        self.electric[b]
    }

    /// Link basis index of dual basis state `b`.
    pub fn link_basis_index(&self, b: usize) -> Result<usize> {
        if self.flip_masks.is_empty() {
            return Err(Error::Capacity {
                engine: "links",
                requested: self.geometry.num_links(),
                max: 64,
                hint: "link-basis mapping needs at most 64 links",
            });
        }
        Ok(self
            .flip_masks
            .iter()
            .enumerate()
            .filter(|(p, _)| b >> p & 1 == 1)
            .fold(0u64, |acc, (_, m)| acc ^ m) as usize)
    }
}

/// Dual Hamiltonian H = -lambda_E [sum_pairs tau_z tau_z + sum_boundary
/// tau_z] - lambda_B sum_p tau_x.
#[derive(Clone, Debug)]
pub struct DualHamiltonian {
    structure: Arc<DualStructure>,
    pub lambda_e: f64,
    pub lambda_b: f64,
}

/// Builds the dual Hamiltonian of a geometry.
pub fn dual_map(geom: &LatticeGeometry, lambda_e: f64, lambda_b: f64) -> Result<DualHamiltonian> {
    Ok(DualHamiltonian::new(
        Arc::new(DualStructure::new(geom)?),
        lambda_e,
        lambda_b,
    ))
}

impl DualHamiltonian {
    pub fn new(structure: Arc<DualStructure>, lambda_e: f64, lambda_b: f64) -> Self {
        Self {
            structure,
            lambda_e,
            lambda_b,
        }
    }

    pub fn with_couplings(&self, lambda_e: f64, lambda_b: f64) -> Self {
        Self::new(self.structure.clone(), lambda_e, lambda_b)
    }

    pub fn structure(&self) -> &Arc<DualStructure> {
        &self.structure
    }

    pub fn num_spins(&self) -> usize {
        self.structure.num_spins()
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    fn apply_generic<T>(&self, x: &[T], y: &mut [T])
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let np = self.num_spins();
        let (le, lb) = (self.lambda_e, self.lambda_b);
        let electric = &self.structure.electric;
        for (b, yb) in y.iter_mut().enumerate() {
            let mut acc = x[b] * (-le * f64::from(electric[b]));
            for p in 0..np {
                acc = acc + x[b ^ (1 << p)] * (-lb);
            }
            *yb = acc;
        }
    }

    /// y <- H x on complex vectors.
    pub fn apply_complex(&self, x: &[C64], y: &mut [C64]) {
        self.apply_generic(x, y)
    }

    /// <psi|H|psi>
    pub fn energy(&self, state: &QubitRegister) -> Result<f64> {
        if state.num_qubits() != self.num_spins() {
            return Err(Error::SizeMismatch(state.num_qubits(), self.num_spins()));
        }
        let x = state.amplitudes();
        let mut y = vec![C64::new(0.0, 0.0); x.len()];
        self.apply_complex(x, &mut y);
        Ok(x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum())
    }
}

impl SymmetricOperator for DualHamiltonian {
    fn dim(&self) -> usize {
        self.structure.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_generic(x, y)
    }

    fn norm_bound(&self) -> f64 {
        self.lambda_e.abs() * self.structure.geometry.num_links() as f64
            + self.lambda_b.abs() * self.num_spins() as f64
    }
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: QubitRegister,
    pub residual: f64,
}

fn to_register(v: &[f64]) -> Result<QubitRegister> {
    // Fix the sign so the largest component is positive.
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(1.0);
    let s = if pivot < 0.0 { -1.0 } else { 1.0 };
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    QubitRegister::from_amplitudes(v.iter().map(|&x| C64::new(s * x / norm, 0.0)).collect())
}

fn lowest(h: &DualHamiltonian, count: usize, cfg: &LanczosConfig) -> Result<Vec<EigenPair>> {
    if h.dim() <= DENSE_LIMIT {
        let (vals, vecs) = lanczos::dense_eigen(h);
        return Ok((0..count.min(vals.len()))
            .map(|i| {
                let v: Vec<f64> = vecs.column(i).iter().copied().collect();
                let residual = residual(h, &v, vals[i]);
                EigenPair {
                    value: vals[i],
                    vector: v,
                    residual,
                }
            })
            .collect());
    }
    lanczos::lowest_eigenpairs(h, count, cfg)
}

fn residual(h: &DualHamiltonian, v: &[f64], e: f64) -> f64 {
    let mut w = vec![0.0; v.len()];
    SymmetricOperator::apply(h, v, &mut w);
    w.iter()
        .zip(v)
        .map(|(a, b)| (a - e * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Lowest eigenpair; dense below `DENSE_LIMIT`, Lanczos above.
pub fn exact_ground_state(h: &DualHamiltonian) -> Result<GroundState> {
    exact_ground_state_with(h, &LanczosConfig::default())
}

pub fn exact_ground_state_with(h: &DualHamiltonian, cfg: &LanczosConfig) -> Result<GroundState> {
    let pair = lowest(h, 1, cfg)?.remove(0);
    Ok(GroundState {
        energy: pair.value,
        state: to_register(&pair.vector)?,
        residual: pair.residual,
    })
}

/// E1 - E0. A gap below 1e-10 is reported as a degenerate ground state.
pub fn spectral_gap(h: &DualHamiltonian) -> Result<f64> {
    let pairs = lowest(h, 2, &LanczosConfig::default())?;
    if pairs.len() < 2 {
        return Err(Error::InvalidInput("gap needs at least two states".into()));
    }
    let gap = pairs[1].value - pairs[0].value;
    if gap < 1e-10 {
        return Err(Error::DegenerateGround(gap));
    }
    Ok(gap)
}

/// Full spectrum by dense diagonalization (small lattices only).
pub fn dense_spectrum(h: &DualHamiltonian) -> Result<Vec<f64>> {
    if h.dim() > 1 << 12 {
        return Err(Error::Capacity {
            engine: "dense dual",
            requested: h.num_spins(),
            max: 12,
            hint: "use exact_ground_state for larger lattices",
        });
    }
    Ok(lanczos::dense_eigen(h).0)
}

/// exp(-i H t) |state> through the dense eigendecomposition (small
/// lattices only).
pub fn evolve_exact(h: &DualHamiltonian, state: &QubitRegister, t: f64) -> Result<QubitRegister> {
    if state.num_qubits() != h.num_spins() {
        return Err(Error::SizeMismatch(state.num_qubits(), h.num_spins()));
    }
    if h.dim() > 1 << 12 {
        return Err(Error::Capacity {
            engine: "dense dual",
            requested: h.num_spins(),
            max: 12,
            hint: "exact propagation is limited to small lattices",
        });
    }
    let (vals, vecs) = lanczos::dense_eigen(h);
    let psi = state.amplitudes();
    let n = h.dim();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (k, &e) in vals.iter().enumerate() {
        let col = vecs.column(k);
        let c: C64 = col.iter().zip(psi).map(|(v, a)| a * *v).sum();
        let c = c * C64::from_polar(1.0, -e * t);
        for (o, v) in out.iter_mut().zip(col.iter()) {
            *o += c * *v;
        }
    }
    QubitRegister::from_amplitudes(out)
}

/// Product of tau_x over the plaquettes enclosed by the loop.
pub fn wilson_operator_dual(geom: &LatticeGeometry, c: &LoopSpec) -> Result<PauliString> {
    PauliString::uniform(Axis::X, geom.loop_enclosed_plaquettes(c)?)
}

pub fn wilson_expectation_dual(
    state: &QubitRegister,
    geom: &LatticeGeometry,
    c: &LoopSpec,
) -> Result<f64> {
    state.expectation_pauli(&wilson_operator_dual(geom, c)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrotterOrder {
    First,
    Second,
}

impl TrotterOrder {
    pub fn from_int(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(Error::InvalidInput(format!("Trotter order must be 1 or 2, got {k}"))),
        }
    }
}

/// W_E(tau) = exp(i tau lambda_E sum tau-Z-terms) on a dual state.
pub fn electric_step_dual(state: &mut QubitRegister, s: &DualStructure, lambda_e: f64, tau: f64) {
    if lambda_e == 0.0 || tau == 0.0 {
        return;
    }
    let a = tau * lambda_e;
    let nl = s.geometry().num_links() as i32;
    let table: Vec<C64> = (-nl..=nl)
        .map(|k| C64::from_polar(1.0, a * f64::from(k)))
        .collect();
    state.map_diagonal(|b, amp| table[(i32::from(s.electric_count(b)) + nl) as usize] * amp);
}

/// W_B(tau) = exp(i tau lambda_B sum_p tau_x(p)) on a dual state.
pub fn magnetic_step_dual(state: &mut QubitRegister, lambda_b: f64, tau: f64) {
    if lambda_b == 0.0 || tau == 0.0 {
        return;
    }
    let (s, c) = (tau * lambda_b).sin_cos();
    let u = [
        [C64::new(c, 0.0), C64::new(0.0, s)],
        [C64::new(0.0, s), C64::new(c, 0.0)],
    ];
    for p in 0..state.num_qubits() {
        state.apply_single_qubit(p, u).expect("qubit in range");
    }
}

/// One Trotter step: W_E W_B (first order) or W_E(tau/2) W_B(tau) W_E(tau/2).
pub fn trotter_step_dual(
    state: &mut QubitRegister,
    s: &DualStructure,
    lambda_e: f64,
    lambda_b: f64,
    tau: f64,
    order: TrotterOrder,
) -> Result<()> {
    if state.num_qubits() != s.num_spins() {
        return Err(Error::SizeMismatch(state.num_qubits(), s.num_spins()));
    }
    match order {
        TrotterOrder::First => {
            magnetic_step_dual(state, lambda_b, tau);
            electric_step_dual(state, s, lambda_e, tau);
        }
        TrotterOrder::Second => {
            electric_step_dual(state, s, lambda_e, tau / 2.0);
            magnetic_step_dual(state, lambda_b, tau);
            electric_step_dual(state, s, lambda_e, tau / 2.0);
        }
    }
    Ok(())
}

/// All dual spins along +x: the ground state of H_B.
pub fn magnetic_ground_state_dual(num_spins: usize) -> Result<QubitRegister> {
    QubitRegister::product(&vec![crate::statevec::SingleQubitState::plus(); num_spins])
}

/// Embeds a dual state into the link register.
pub fn dual_to_links(s: &DualStructure, dual: &QubitRegister) -> Result<QubitRegister> {
    if dual.num_qubits() != s.num_spins() {
        return Err(Error::SizeMismatch(dual.num_qubits(), s.num_spins()));
    }
    let mut links = QubitRegister::zero(s.geometry.num_links())?;
    let out = links.amplitudes_mut();
    out[0] = C64::new(0.0, 0.0);
    for (b, &a) in dual.amplitudes().iter().enumerate() {
        out[s.link_basis_index(b)?] = a;
    }
    Ok(links)
}

/// Restricts a link state in the A(x) = +1 sector to dual variables. Fails if
/// more than 1e-10 of the norm lies outside the sector.
pub fn links_to_dual(s: &DualStructure, links: &QubitRegister) -> Result<QubitRegister> {
    if links.num_qubits() != s.geometry.num_links() {
        return Err(Error::SizeMismatch(links.num_qubits(), s.geometry.num_links()));
    }
    let amps = links.amplitudes();
    let dual: Vec<C64> = (0..s.dim())
        .map(|b| s.link_basis_index(b).map(|i| amps[i]))
        .collect::<Result<_>>()?;
    let captured: f64 = dual.iter().map(|a| a.norm_sqr()).sum();
    if (captured - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!(
            "link state has weight {:e} outside the A(x) = +1 sector",
            1.0 - captured
        )));
    }
    QubitRegister::from_amplitudes(dual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(lx: usize, ly: usize) -> LatticeGeometry {
        LatticeGeometry::new(lx, ly).unwrap()
    }

    #[test]
    fn term_counts() {
        let h = dual_map(&geom(2, 2), 1.0, 1.0).unwrap();
        assert_eq!(h.structure().pairs().len(), 4);
        assert_eq!(h.structure().singles().len(), 8);
        let h = dual_map(&geom(1, 1), 1.0, 1.0).unwrap();
        assert_eq!(h.structure().singles(), &[0, 0, 0, 0]);
    }

    #[test]
    fn single_plaquette_spectrum() {
        // H = -4 lE tau_z - lB tau_x  =>  E = -+sqrt(16 lE^2 + lB^2)
        let h = dual_map(&geom(1, 1), 1.0, 0.7).unwrap();
        let spec = dense_spectrum(&h).unwrap();
        let e = (16.0f64 + 0.49).sqrt();
        assert!((spec[0] + e).abs() < 1e-12);
        assert!((spec[1] - e).abs() < 1e-12);
    }

    #[test]
    fn electric_limit() {
        for (lx, ly) in [(1, 1), (2, 2), (2, 3)] {
            let g = geom(lx, ly);
            let h = dual_map(&g, 1.3, 0.0).unwrap();
            let gs = exact_ground_state(&h).unwrap();
            assert!((gs.energy + 1.3 * g.num_links() as f64).abs() < 1e-10);
            assert!((gs.state.amplitudes()[0].norm() - 1.0).abs() < 1e-10);
            for c in g.all_loops() {
                assert!(wilson_expectation_dual(&gs.state, &g, &c).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn magnetic_limit() {
        let g = geom(2, 3);
        let h = dual_map(&g, 0.0, 0.8).unwrap();
        let gs = exact_ground_state(&h).unwrap();
        assert!((gs.energy + 0.8 * 6.0).abs() < 1e-10);
        for c in g.all_loops() {
            assert!((wilson_expectation_dual(&gs.state, &g, &c).unwrap() - 1.0).abs() < 1e-10);
        }
        assert!((spectral_gap(&h).unwrap() - 1.6).abs() < 1e-10);
    }

    #[test]
    fn gap_single_plaquette_electric() {
        let h = dual_map(&geom(1, 1), 1.0, 0.0).unwrap();
        assert!((spectral_gap(&h).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_dual_product_states() {
        let g = geom(2, 2);
        let up = QubitRegister::zero(4).unwrap();
        let plus = magnetic_ground_state_dual(4).unwrap();
        let c = LoopSpec::new(0, 0, 2, 1);
        assert_eq!(wilson_expectation_dual(&up, &g, &c).unwrap(), 0.0);
        assert!((wilson_expectation_dual(&plus, &g, &c).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_time_step_is_identity() {
        let g = geom(2, 2);
        let s = DualStructure::new(&g).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(4);
        let psi = QubitRegister::random(4, &mut rng).unwrap();
        let mut phi = psi.clone();
        trotter_step_dual(&mut phi, &s, 1.0, 2.0, 0.0, TrotterOrder::Second).unwrap();
        assert_eq!(phi, psi);
    }

    #[test]
    fn dual_link_round_trip() {
        let g = geom(2, 2);
        let s = DualStructure::new(&g).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let psi = QubitRegister::random(4, &mut rng).unwrap();
        let links = dual_to_links(&s, &psi).unwrap();
        let back = links_to_dual(&s, &links).unwrap();
        assert!(back.distance(&psi).unwrap() < 1e-15);
        let off_sector = QubitRegister::basis(g.num_links(), 1).unwrap();
        assert!(links_to_dual(&s, &off_sector).is_err());
    }

    #[test]
    fn exact_evolution_single_plaquette() {
        // H = -4 tau_z - tau_x; check against the closed form.
        let h = dual_map(&geom(1, 1), 1.0, 1.0).unwrap();
        let psi = QubitRegister::zero(1).unwrap();
        let t = 0.37;
        let out = evolve_exact(&h, &psi, t).unwrap();
        let w = 17f64.sqrt();
        let (s, c) = (w * t).sin_cos();
        let up = C64::new(c, 4.0 * s / w);
        let down = C64::new(0.0, s / w);
        assert!((out.amplitudes()[0] - up).norm() < 1e-12);
        assert!((out.amplitudes()[1] - down).norm() < 1e-12);
    }

    #[test]
    fn capacity_rejected() {
        let g = geom(5, 5);
        assert!(matches!(
            DualStructure::with_cap(&g, 1 << 20),
            Err(Error::Capacity { .. })
        ));
    }
}
