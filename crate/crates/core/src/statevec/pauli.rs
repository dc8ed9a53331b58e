//! Pauli strings: tensor products of single-qubit Pauli factors with a phase
//! in {+1, -1, +i, -i}.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// Product of two single-qubit Paulis, as (phase exponent of i, result).
    /// `None` means identity.
    fn product(self, rhs: Axis) -> (u8, Option<Axis>) {
        use Axis::*;
        match (self, rhs) {
            (a, b) if a == b => (0, None),
            (X, Y) => (1, Some(Z)),
            (Y, X) => (3, Some(Z)),
            (Y, Z) => (1, Some(X)),
            (Z, Y) => (3, Some(X)),
            (Z, X) => (1, Some(Y)),
            (X, Z) => (3, Some(Y)),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Phase i^k, stored as k mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Self {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// A phase times a product of Pauli factors on distinct qubits.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PauliString {
    factors: BTreeMap<usize, Axis>,
    phase: Phase,
}

/// Bit masks describing how a Pauli string acts on computational basis
/// states: P|b> = coeff * (-1)^{popcount(b & z)} |b ^ x>.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliMasks {
    pub x: u64,
    pub z: u64,
    /// Overall phase including the i per Y factor.
    pub coeff: Phase,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, axis: Axis) -> Self {
        let mut factors = BTreeMap::new();
        factors.insert(qubit, axis);
        Self {
            factors,
            phase: Phase::ONE,
        }
    }

    /// Builds a string with the same axis on every listed qubit. Duplicate
    /// qubits are rejected.
    pub fn uniform<I>(axis: Axis, qubits: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut factors = BTreeMap::new();
        for q in qubits {
            if factors.insert(q, axis).is_some() {
                return Err(Error::InvalidInput(format!(
                    "qubit {q} appears twice in Pauli string"
                )));
            }
        }
        Ok(Self {
            factors,
            phase: Phase::ONE,
        })
    }

    pub fn from_factors<I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Axis)>,
    {
        let mut map = BTreeMap::new();
        for (q, a) in factors {
            if map.insert(q, a).is_some() {
                return Err(Error::InvalidInput(format!(
                    "qubit {q} appears twice in Pauli string"
                )));
            }
        }
        Ok(Self {
            factors: map,
            phase: Phase::ONE,
        })
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, Axis)> + '_ {
        self.factors.iter().map(|(&q, &a)| (q, a))
    }

    pub fn axis(&self, qubit: usize) -> Option<Axis> {
        self.factors.get(&qubit).copied()
    }

    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.keys().next_back().copied()
    }

    /// Hermitian iff the phase is real (the factors themselves are Hermitian).
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .factors
            .iter()
            .filter(|(q, a)| matches!(other.factors.get(q), Some(b) if b != *a))
            .count();
        anti % 2 == 0
    }

    /// Bit masks for a register of `n` qubits.
    pub fn masks(&self, n: usize) -> Result<PauliMasks> {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut ys = 0u8;
        for (&q, &a) in &self.factors {
            if q >= n {
                return Err(Error::OutOfRange {
                    what: "qubit",
                    index: q,
                    size: n,
                });
            }
            let bit = 1u64 << q;
            match a {
                Axis::X => x |= bit,
                Axis::Z => z |= bit,
                Axis::Y => {
                    x |= bit;
                    z |= bit;
                    ys = (ys + 1) % 4;
                }
            }
        }
        Ok(PauliMasks {
            x,
            z,
            coeff: self.phase * Phase::from_power(ys),
        })
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        let mut factors = self.factors.clone();
        let mut phase = self.phase * rhs.phase;
        for (&q, &b) in &rhs.factors {
            match factors.remove(&q) {
                None => {
                    factors.insert(q, b);
                }
                Some(a) => {
                    let (k, c) = a.product(b);
                    phase = phase * Phase::from_power(k);
                    if let Some(c) = c {
                        factors.insert(q, c);
                    }
                }
            }
        }
        PauliString { factors, phase }
    }
}

impl Mul for PauliString {
    type Output = PauliString;
    fn mul(self, rhs: PauliString) -> PauliString {
        &self * &rhs
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase.power() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{sign}")?;
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (i, (q, a)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}{q}")?;
        }
        Ok(())
    }
}
