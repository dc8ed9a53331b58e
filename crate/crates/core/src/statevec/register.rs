use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;

use super::pauli::{PauliMasks, PauliString};
use crate::error::{Error, Result};

/// Largest register the dense engines accept.
pub const MAX_QUBITS: usize = 26;

/// Registers at or above this size run their kernels on the rayon pool.
const PARALLEL_MIN_QUBITS: usize = 14;

/// Fixed block length for reductions. Partial sums are taken per block and
/// then added in block order, so results do not depend on the thread count.
const REDUCE_BLOCK: usize = 1 << 12;

const NORM_TOL: f64 = 1e-10;

/// Amplitudes of one qubit in the (|up>, |down>) basis. Qubit value 0 is
/// sigma_z = +1 ("up").
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitState(pub [C64; 2]);

impl SingleQubitState {
    pub fn up() -> Self {
        Self([C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    }

    pub fn down() -> Self {
        Self([C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    /// sigma_x = +1 eigenstate, (|up> + |down>)/sqrt(2).
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self([C64::new(h, 0.0), C64::new(h, 0.0)])
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self([C64::new(h, 0.0), C64::new(-h, 0.0)])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }
}

/// Dense state vector over `n` qubits. Qubit `q` is bit `q` of the basis
/// index.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitRegister {
    n: usize,
    amps: Vec<C64>,
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    check_engine_capacity(n, "dense state-vector")
}

/// Fails with a capacity error naming `engine` if `n` qubits exceed
/// `MAX_QUBITS`.
pub fn check_engine_capacity(n: usize, engine: &'static str) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::Capacity {
            engine,
            requested: n,
            max: MAX_QUBITS,
            hint: "use the dual (plaquette-spin) engine for larger lattices",
        });
    }
    Ok(())
}

#[inline]
fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

#[inline]
fn sign(v: u64) -> f64 {
    if parity(v) {
        -1.0
    } else {
        1.0
    }
}

impl QubitRegister {
    /// The all-up basis state |0...0>.
    pub fn zero(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_capacity(n)?;
        if index >= 1 << n {
            return Err(Error::OutOfRange {
                what: "basis state",
                index,
                size: 1 << n,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the vector
    /// normalized.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_capacity(n)?;
        let reg = Self { n, amps };
        let norm = reg.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(reg)
    }

    /// Product state from one single-qubit state per qubit (qubit 0 first).
    pub fn product(assignments: &[SingleQubitState]) -> Result<Self> {
        let n = assignments.len();
        check_capacity(n)?;
        for s in assignments {
            if (s.norm_sqr() - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(s.norm_sqr()));
            }
        }
        let mut amps = vec![C64::new(1.0, 0.0)];
        amps.reserve((1 << n) - 1);
        // Qubit q doubles the vector; the new half carries bit q set.
        for s in assignments {
            let len = amps.len();
            amps.extend_from_within(..len);
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= s.0[(i >= len) as usize];
            }
        }
        Ok(Self { n, amps })
    }

    /// Normalized random state with uniformly drawn real and imaginary parts.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_capacity(n)?;
        let mut amps: Vec<C64> = (0..1usize << n)
            .map(|_| {
                C64::new(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                )
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    fn parallel(&self) -> bool {
        self.n >= PARALLEL_MIN_QUBITS
    }

    /// Deterministic blocked reduction of `f(index, amp)`.
    fn reduce<T, F>(&self, f: F) -> T
    where
        T: Send + Copy + std::iter::Sum<T> + std::ops::Add<Output = T> + Default,
        F: Fn(usize, C64) -> T + Sync,
    {
        let block = |(bi, chunk): (usize, &[C64])| -> T {
            let base = bi * REDUCE_BLOCK;
            chunk
                .iter()
                .enumerate()
                .fold(T::default(), |acc, (j, &a)| acc + f(base + j, a))
        };
        let partials: Vec<T> = if self.parallel() {
            self.amps
                .par_chunks(REDUCE_BLOCK)
                .enumerate()
                .map(block)
                .collect()
        } else {
            self.amps.chunks(REDUCE_BLOCK).enumerate().map(block).collect()
        };
        partials.into_iter().fold(T::default(), |acc, p| acc + p)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.reduce(|_, a| a.norm_sqr())
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm_sqr();
        if norm < 1e-300 {
            return Err(Error::ProjectionNull(norm));
        }
        let inv = 1.0 / norm.sqrt();
        self.map_diagonal(|_, a| a * inv);
        Ok(norm)
    }

    pub fn inner(&self, other: &QubitRegister) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let rhs = &other.amps;
        Ok(self.reduce(|i, a| a.conj() * rhs[i]))
    }

    /// Global-phase-insensitive overlap |<self|other>|^2.
    pub fn fidelity(&self, other: &QubitRegister) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &QubitRegister) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let rhs = &other.amps;
        Ok(self.reduce(|i, a| (a - rhs[i]).norm_sqr()).sqrt())
    }

    /// Applies `f(index, amp)` to every amplitude.
    pub fn map_diagonal<F>(&mut self, f: F)
    where
        F: Fn(usize, C64) -> C64 + Sync,
    {
        let block = |(bi, chunk): (usize, &mut [C64])| {
            let base = bi * REDUCE_BLOCK;
            for (j, a) in chunk.iter_mut().enumerate() {
                *a = f(base + j, *a);
            }
        };
        if self.parallel() {
            self.amps
                .par_chunks_mut(REDUCE_BLOCK)
                .enumerate()
                .for_each(block);
        } else {
            self.amps.chunks_mut(REDUCE_BLOCK).enumerate().for_each(block);
        }
    }

    /// Visits every pair (b, b ^ x) exactly once with `x != 0`, writing back
    /// the two values returned by `f(b, amp_b, b', amp_b')`.
    fn map_pairs<F>(&mut self, x: u64, f: F)
    where
        F: Fn(usize, C64, usize, C64) -> (C64, C64) + Sync,
    {
        debug_assert!(x != 0);
        let k = 63 - x.leading_zeros() as usize;
        let half = 1usize << k;
        let low = (x as usize) & (half - 1);
        let block = |(ci, chunk): (usize, &mut [C64])| {
            let base = ci * 2 * half;
            let (lo, hi) = chunk.split_at_mut(half);
            for j in 0..half {
                let jp = j ^ low;
                let (nb, nbp) = f(base + j, lo[j], base + half + jp, hi[jp]);
                lo[j] = nb;
                hi[jp] = nbp;
            }
        };
        if self.parallel() {
            self.amps.par_chunks_mut(2 * half).enumerate().for_each(block);
        } else {
            self.amps.chunks_mut(2 * half).enumerate().for_each(block);
        }
    }

    fn hermitian_masks(&self, p: &PauliString) -> Result<PauliMasks> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(format!("{p} has an imaginary phase")));
        }
        p.masks(self.n)
    }

    /// state <- P state
    pub fn apply_pauli_string(&mut self, p: &PauliString) -> Result<()> {
        let m = p.masks(self.n)?;
        let c = m.coeff.to_complex();
        if m.x == 0 {
            self.map_diagonal(|b, a| c * sign(b as u64 & m.z) * a);
        } else {
            self.map_pairs(m.x, |b, ab, bp, abp| {
                (
                    c * sign(bp as u64 & m.z) * abp,
                    c * sign(b as u64 & m.z) * ab,
                )
            });
        }
        Ok(())
    }

    /// state <- exp(-i phi P) state, for Hermitian P with P^2 = 1.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, phi: f64) -> Result<()> {
        let m = self.hermitian_masks(p)?;
        let (s, c) = phi.sin_cos();
        let mis = C64::new(0.0, -s) * m.coeff.to_complex();
        if m.x == 0 {
            self.map_diagonal(|b, a| (c + mis * sign(b as u64 & m.z)) * a);
        } else {
            self.map_pairs(m.x, |b, ab, bp, abp| {
                (
                    c * ab + mis * sign(bp as u64 & m.z) * abp,
                    c * abp + mis * sign(b as u64 & m.z) * ab,
                )
            });
        }
        Ok(())
    }

    /// Applies a 2x2 unitary `[[u00, u01], [u10, u11]]` to qubit `q`.
    pub fn apply_single_qubit(&mut self, q: usize, u: [[C64; 2]; 2]) -> Result<()> {
        if q >= self.n {
            return Err(Error::OutOfRange {
                what: "qubit",
                index: q,
                size: self.n,
            });
        }
        self.map_pairs(1 << q, |_, a0, _, a1| {
            (u[0][0] * a0 + u[0][1] * a1, u[1][0] * a0 + u[1][1] * a1)
        });
        Ok(())
    }

    /// Multiplies each amplitude by exp(-i theta(b)).
    pub fn apply_diagonal_phase<F>(&mut self, theta: F)
    where
        F: Fn(usize) -> f64 + Sync,
    {
        self.map_diagonal(|b, a| {
            let (s, c) = theta(b).sin_cos();
            C64::new(c, -s) * a
        });
    }

    /// <state|P|state> for Hermitian P. Fails if the imaginary part exceeds
    /// 1e-8.
    pub fn expectation_pauli(&self, p: &PauliString) -> Result<f64> {
        let m = self.hermitian_masks(p)?;
        let c = m.coeff.to_complex();
        let amps = &self.amps;
        let v: C64 = self.reduce(|b, a| {
            let bp = b ^ m.x as usize;
            a.conj() * amps[bp] * sign(bp as u64 & m.z)
        }) * c;
        if v.im.abs() > 1e-8 {
            return Err(Error::NonHermitian(format!(
                "expectation of {p} has imaginary part {:e}",
                v.im
            )));
        }
        Ok(v.re)
    }

    /// Expectations of several diagonal parity operators
    /// (-1)^{popcount(b & mask)} in one pass.
    pub fn expectation_parities(&self, masks: &[u64]) -> Vec<f64> {
        // Fall back to per-mask passes for very long lists.
        if masks.len() > 64 {
            return masks
                .iter()
                .map(|&mk| self.reduce(|b, a| a.norm_sqr() * sign(b as u64 & mk)))
                .collect();
        }
        let k = masks.len();
        let partials: Vec<[f64; 64]> = {
            let block = |(bi, chunk): (usize, &[C64])| {
                let base = bi * REDUCE_BLOCK;
                let mut acc = [0.0; 64];
                for (j, a) in chunk.iter().enumerate() {
                    let w = a.norm_sqr();
                    let b = (base + j) as u64;
                    for (slot, &mk) in acc.iter_mut().zip(masks) {
                        *slot += w * sign(b & mk);
                    }
                }
                acc
            };
            if self.parallel() {
                self.amps
                    .par_chunks(REDUCE_BLOCK)
                    .enumerate()
                    .map(block)
                    .collect()
            } else {
                self.amps.chunks(REDUCE_BLOCK).enumerate().map(block).collect()
            }
        };
        let mut out = vec![0.0; k];
        for p in partials {
            for (o, v) in out.iter_mut().zip(p.iter()) {
                *o += v;
            }
        }
        out
    }

    /// Projects onto the `eigenvalue` (+1 or -1) eigenspace of P, renormalizes
    /// and returns the probability of the outcome.
    pub fn apply_projector(&mut self, p: &PauliString, eigenvalue: i8) -> Result<f64> {
        if eigenvalue != 1 && eigenvalue != -1 {
            return Err(Error::InvalidInput(format!(
                "projector eigenvalue must be +1 or -1, got {eigenvalue}"
            )));
        }
        let m = self.hermitian_masks(p)?;
        let lam = m.coeff.to_complex() * f64::from(eigenvalue);
        if m.x == 0 {
            self.map_diagonal(|b, a| 0.5 * (1.0 + lam * sign(b as u64 & m.z)) * a);
        } else {
            self.map_pairs(m.x, |b, ab, bp, abp| {
                (
                    0.5 * (ab + lam * sign(bp as u64 & m.z) * abp),
                    0.5 * (abp + lam * sign(b as u64 & m.z) * ab),
                )
            });
        }
        let prob = self.norm_sqr();
        if prob < 1e-14 {
            return Err(Error::ProjectionNull(prob));
        }
        let inv = 1.0 / prob.sqrt();
        self.map_diagonal(|_, a| a * inv);
        Ok(prob)
    }

    /// Reduced density matrix on `qubits` (row-major, dimension 2^k, local
    /// bit i = qubits[i]).
    pub fn reduced_density_matrix(&self, qubits: &[usize]) -> Result<Vec<C64>> {
        for &q in qubits {
            if q >= self.n {
                return Err(Error::OutOfRange {
                    what: "qubit",
                    index: q,
                    size: self.n,
                });
            }
        }
        let k = qubits.len();
        let d = 1usize << k;
        let sub_mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
        let embed = |local: usize| -> usize {
            qubits
                .iter()
                .enumerate()
                .filter(|(i, _)| local >> i & 1 == 1)
                .map(|(_, &q)| 1usize << q)
                .sum()
        };
        let offsets: Vec<usize> = (0..d).map(embed).collect();
        let mut rho = vec![C64::new(0.0, 0.0); d * d];
        for rest in 0..self.amps.len() {
            if rest & sub_mask != 0 {
                continue;
            }
            for i in 0..d {
                let ai = self.amps[rest | offsets[i]];
                if ai == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    rho[i * d + j] += ai * self.amps[rest | offsets[j]].conj();
                }
            }
        }
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::Axis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn y_rotation_and_projector() {
        // exp(-i phi Y)|0> = cos(phi)|0> + sin(phi)|1>
        let mut s = QubitRegister::zero(2).unwrap();
        s.apply_pauli_rotation(&PauliString::single(1, Axis::Y), 0.3).unwrap();
        assert!((s.amplitudes()[0] - C64::new(0.3f64.cos(), 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[2] - C64::new(0.3f64.sin(), 0.0)).norm() < 1e-15);
        // |0> is an equal mix of the Y eigenstates
        let mut s = QubitRegister::zero(1).unwrap();
        let p = s.apply_projector(&PauliString::single(0, Axis::Y), 1).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let y = s.expectation_pauli(&PauliString::single(0, Axis::Y)).unwrap();
        assert!((y - 1.0).abs() < 1e-15);
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn product_all_up() {
        let r = QubitRegister::product(&[SingleQubitState::up(); 3]).unwrap();
        assert!(close(r.amplitudes()[0], C64::new(1.0, 0.0)));
        assert!(r.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn product_plus() {
        let r = QubitRegister::product(&[SingleQubitState::plus()]).unwrap();
        assert!(close(r.amplitudes()[0], C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(r.amplitudes()[1], C64::new(FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn product_bit_order() {
        // qubit 0 up, qubit 1 plus: amplitudes at 0b00 and 0b10
        let r =
            QubitRegister::product(&[SingleQubitState::up(), SingleQubitState::plus()]).unwrap();
        let a = r.amplitudes();
        assert!(close(a[0], C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(a[1], C64::new(0.0, 0.0)));
        assert!(close(a[2], C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(a[3], C64::new(0.0, 0.0)));
    }

    #[test]
    fn product_rejects_unnormalized() {
        let bad = SingleQubitState([C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(
            QubitRegister::product(&[bad]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn pauli_x_and_z() {
        let mut r = QubitRegister::zero(1).unwrap();
        r.apply_pauli_string(&PauliString::single(0, Axis::X)).unwrap();
        assert!(close(r.amplitudes()[1], C64::new(1.0, 0.0)));
        r.apply_pauli_string(&PauliString::single(0, Axis::Z)).unwrap();
        assert!(close(r.amplitudes()[1], C64::new(-1.0, 0.0)));
    }

    #[test]
    fn pauli_out_of_range() {
        let mut r = QubitRegister::zero(2).unwrap();
        assert!(r
            .apply_pauli_string(&PauliString::single(2, Axis::X))
            .is_err());
    }

    #[test]
    fn rotation_z_is_phase_on_up() {
        let mut r = QubitRegister::zero(1).unwrap();
        r.apply_pauli_rotation(&PauliString::single(0, Axis::Z), 0.7)
            .unwrap();
        assert!(close(r.amplitudes()[0], C64::new(0.7f64.cos(), -0.7f64.sin())));
    }

    #[test]
    fn rotation_x_half_pi() {
        let mut r = QubitRegister::zero(1).unwrap();
        r.apply_pauli_rotation(&PauliString::single(0, Axis::X), FRAC_PI_2)
            .unwrap();
        assert!(close(r.amplitudes()[1], C64::new(0.0, -1.0)));
        assert!(r.amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn rotation_rejects_imaginary_phase() {
        let mut r = QubitRegister::zero(1).unwrap();
        let p = PauliString::single(0, Axis::X).with_phase(crate::statevec::Phase::I);
        assert!(matches!(
            r.apply_pauli_rotation(&p, 0.1),
            Err(Error::NonHermitian(_))
        ));
    }

    #[test]
    fn expectations() {
        let up = QubitRegister::zero(1).unwrap();
        let plus = QubitRegister::product(&[SingleQubitState::plus()]).unwrap();
        let z = PauliString::single(0, Axis::Z);
        assert!((up.expectation_pauli(&z).unwrap() - 1.0).abs() < 1e-15);
        assert!(plus.expectation_pauli(&z).unwrap().abs() < 1e-15);
    }

    #[test]
    fn projectors() {
        let mut r = QubitRegister::zero(1).unwrap();
        let p = r
            .apply_projector(&PauliString::single(0, Axis::X), 1)
            .unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let plus = QubitRegister::product(&[SingleQubitState::plus()]).unwrap();
        assert!((r.fidelity(&plus).unwrap() - 1.0).abs() < 1e-15);

        let mut r = QubitRegister::zero(1).unwrap();
        let p = r
            .apply_projector(&PauliString::single(0, Axis::Z), 1)
            .unwrap();
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn projection_onto_null_space_fails() {
        let mut r = QubitRegister::zero(1).unwrap();
        assert!(matches!(
            r.apply_projector(&PauliString::single(0, Axis::Z), -1),
            Err(Error::ProjectionNull(_))
        ));
    }

    #[test]
    fn fidelity_cases() {
        let a = QubitRegister::basis(2, 1).unwrap();
        let b = QubitRegister::basis(2, 2).unwrap();
        assert_eq!(a.fidelity(&a).unwrap(), 1.0);
        assert_eq!(a.fidelity(&b).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = QubitRegister::random(3, &mut rng).unwrap();
        let mut t = s.clone();
        t.map_diagonal(|_, a| a * C64::from_polar(1.0, 1.234));
        assert!((s.fidelity(&t).unwrap() - 1.0).abs() < 1e-14);
        assert!(a.fidelity(&QubitRegister::zero(3).unwrap()).is_err());
    }

    #[test]
    fn capacity_error_names_dual_engine() {
        let err = QubitRegister::zero(MAX_QUBITS + 1).unwrap_err();
        assert!(err.to_string().contains("dual"));
    }

    #[test]
    fn parities_match_single_expectations() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = QubitRegister::random(5, &mut rng).unwrap();
        let masks = [0b00011u64, 0b10100, 0b11111];
        let got = s.expectation_parities(&masks);
        for (m, g) in masks.iter().zip(got) {
            let p = PauliString::uniform(Axis::Z, (0..5).filter(|q| m >> q & 1 == 1)).unwrap();
            assert!((s.expectation_pauli(&p).unwrap() - g).abs() < 1e-13);
        }
    }

    #[test]
    fn reduced_density_of_product_state_is_pure() {
        let r = QubitRegister::product(&[
            SingleQubitState::plus(),
            SingleQubitState::up(),
            SingleQubitState::minus(),
        ])
        .unwrap();
        let rho = r.reduced_density_matrix(&[0, 2]).unwrap();
        let purity: f64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (rho[i * 4 + j] * rho[j * 4 + i]).re)
            .sum();
        assert!((purity - 1.0).abs() < 1e-14);
    }
}
