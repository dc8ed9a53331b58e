//! Primitive gates and gate sequences acting on a qubit register.
//!
//! Rotation convention: every angle `phi` means exp(-i phi G) for the named
//! generator G.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::statevec::{Axis, PauliString, QubitRegister};

/// Which group of atoms a single-qubit layer addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Links,
    Controls,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// exp(-i phi_q sigma_axis(q)) on each listed qubit.
    Rotation {
        target: Target,
        axis: Axis,
        angles: Vec<(usize, f64)>,
    },
    /// exp(-i theta sigma_x(a) sigma_x(b)) for each listed pair; the
    /// photon-mediated exchange.
    Interaction { pairs: Vec<(usize, usize, f64)> },
    /// exp(-i phi P).
    PauliRotation { pauli: PauliString, angle: f64 },
    /// Projection onto the +-1 eigenspace of `axis` on one qubit,
    /// renormalized.
    Projector {
        qubit: usize,
        axis: Axis,
        eigenvalue: i8,
    },
    Pauli(PauliString),
}

fn single_qubit_rotation(axis: Axis, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = phi.sin_cos();
    let (c, z) = (C64::new(c, 0.0), C64::new(0.0, 0.0));
    match axis {
        Axis::X => [[c, C64::new(0.0, -s)], [C64::new(0.0, -s), c]],
        Axis::Y => [[c, C64::new(-s, 0.0)], [C64::new(s, 0.0), c]],
        Axis::Z => [[C64::new(c.re, -s), z], [z, C64::new(c.re, s)]],
    }
}

impl Gate {
    /// Applies the gate; returns the outcome probability for projectors and
    /// 1 otherwise.
    pub fn apply(&self, state: &mut QubitRegister) -> Result<f64> {
        match self {
            Gate::Rotation { axis, angles, .. } => {
                for &(q, phi) in angles {
                    if phi != 0.0 {
                        state.apply_single_qubit(q, single_qubit_rotation(*axis, phi))?;
                    }
                }
            }
            Gate::Interaction { pairs } => {
                for &(a, b, theta) in pairs {
                    if theta != 0.0 {
                        let xx = PauliString::from_factors([(a, Axis::X), (b, Axis::X)])?;
                        state.apply_pauli_rotation(&xx, theta)?;
                    }
                }
            }
            Gate::PauliRotation { pauli, angle } => state.apply_pauli_rotation(pauli, *angle)?,
            Gate::Projector {
                qubit,
                axis,
                eigenvalue,
            } => {
                return state.apply_projector(&PauliString::single(*qubit, *axis), *eigenvalue);
            }
            Gate::Pauli(p) => state.apply_pauli_string(p)?,
        }
        Ok(1.0)
    }

    /// The inverse gate; projectors have none.
    pub fn inverse(&self) -> Result<Gate> {
        Ok(match self {
            Gate::Rotation {
                target,
                axis,
                angles,
            } => Gate::Rotation {
                target: *target,
                axis: *axis,
                angles: angles.iter().rev().map(|&(q, a)| (q, -a)).collect(),
            },
            Gate::Interaction { pairs } => Gate::Interaction {
                pairs: pairs.iter().rev().map(|&(a, b, t)| (a, b, -t)).collect(),
            },
            Gate::PauliRotation { pauli, angle } => Gate::PauliRotation {
                pauli: pauli.clone(),
                angle: -angle,
            },
            Gate::Pauli(p) => {
                // P^-1 = P^dag; for a Hermitian string that is P itself.
                let dag = p.clone().with_phase(p.phase().conj());
                Gate::Pauli(dag)
            }
            Gate::Projector { .. } => {
                return Err(Error::InvalidInput("projectors are not invertible".into()))
            }
        })
    }

    fn max_qubit(&self) -> Option<usize> {
        match self {
            Gate::Rotation { angles, .. } => angles.iter().map(|a| a.0).max(),
            Gate::Interaction { pairs } => pairs.iter().map(|p| p.0.max(p.1)).max(),
            Gate::PauliRotation { pauli, .. } => pauli.max_qubit(),
            Gate::Projector { qubit, .. } => Some(*qubit),
            Gate::Pauli(p) => p.max_qubit(),
        }
    }
}

/// An ordered gate list bound to a register size; gates apply first to last.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GateSeq {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl GateSeq {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(q) = gate.max_qubit() {
            if q >= self.num_qubits {
                return Err(Error::OutOfRange {
                    what: "qubit",
                    index: q,
                    size: self.num_qubits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other` (applied after the current ones).
    pub fn extend(&mut self, other: &GateSeq) -> Result<()> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_unitary(&self) -> bool {
        !self.gates.iter().any(|g| matches!(g, Gate::Projector { .. }))
    }

    /// Applies all gates; returns the product of projector probabilities.
    pub fn apply(&self, state: &mut QubitRegister) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch(state.num_qubits(), self.num_qubits));
        }
        let mut prob = 1.0;
        for g in &self.gates {
            prob *= g.apply(state)?;
        }
        Ok(prob)
    }

    pub fn inverse(&self) -> Result<GateSeq> {
        Ok(GateSeq {
            num_qubits: self.num_qubits,
            gates: self
                .gates
                .iter()
                .rev()
                .map(Gate::inverse)
                .collect::<Result<_>>()?,
        })
    }

    /// Columns of the dense matrix, by applying the sequence to each basis
    /// state. Unitary sequences only; intended for small registers.
    pub fn dense_columns(&self) -> Result<Vec<Vec<C64>>> {
        if !self.is_unitary() {
            return Err(Error::InvalidInput("sequence contains projectors".into()));
        }
        (0..1usize << self.num_qubits)
            .map(|j| {
                let mut e = QubitRegister::basis(self.num_qubits, j)?;
                self.apply(&mut e)?;
                Ok(e.into_amplitudes())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn rotation_matches_pauli_rotation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let psi = QubitRegister::random(3, &mut rng).unwrap();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let mut a = psi.clone();
            Gate::Rotation {
                target: Target::Links,
                axis,
                angles: vec![(1, 0.37)],
            }
            .apply(&mut a)
            .unwrap();
            let mut b = psi.clone();
            b.apply_pauli_rotation(&PauliString::single(1, axis), 0.37)
                .unwrap();
            let d = a.distance(&b).unwrap();
            assert!(d < 1e-14, "{axis:?}: {d}");
        }
    }

    #[test]
    fn inverse_undoes() {
        let mut seq = GateSeq::new(3);
        seq.push(Gate::Rotation {
            target: Target::Controls,
            axis: Axis::Y,
            angles: vec![(0, 0.3), (2, -1.1)],
        })
        .unwrap();
        seq.push(Gate::Interaction {
            pairs: vec![(0, 1, 0.7), (1, 2, 0.2)],
        })
        .unwrap();
        seq.push(Gate::Pauli(
            PauliString::single(1, Axis::Y).with_phase(crate::statevec::Phase::I),
        ))
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let psi = QubitRegister::random(3, &mut rng).unwrap();
        let mut phi = psi.clone();
        seq.apply(&mut phi).unwrap();
        seq.inverse().unwrap().apply(&mut phi).unwrap();
        assert!(phi.distance(&psi).unwrap() < 1e-14);
    }

    #[test]
    fn push_checks_range() {
        let mut seq = GateSeq::new(2);
        assert!(seq.push(Gate::Pauli(PauliString::single(2, Axis::X))).is_err());
    }

    #[test]
    fn projector_not_invertible() {
        let mut seq = GateSeq::new(1);
        seq.push(Gate::Projector {
            qubit: 0,
            axis: Axis::X,
            eigenvalue: 1,
        })
        .unwrap();
        assert!(!seq.is_unitary());
        assert!(seq.inverse().is_err());
    }
}
