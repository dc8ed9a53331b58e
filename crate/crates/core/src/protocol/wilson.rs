//! Wilson-loop readout through controls, and loop composition.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::lattice::{DistanceSet, LatticeGeometry, LoopSpec};
use crate::statevec::{Axis, PauliString, QubitRegister};

use super::gates::{Gate, GateSeq, Target};
use super::stator::FullLayout;

/// Sub-loops tiling a rectangle exactly once.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopProduct {
    pub outer: LoopSpec,
    pub parts: Vec<LoopSpec>,
}

impl LoopProduct {
    /// Product of the parts' loop strings; shared edges cancel.
    pub fn operator(&self, geom: &LatticeGeometry) -> Result<PauliString> {
        let mut acc = PauliString::identity();
        for c in &self.parts {
            acc = &acc * &geom.loop_operator(c)?;
        }
        Ok(acc)
    }
}

/// Checks that `loops` cover a rectangle with every enclosed plaquette
/// covered exactly once.
pub fn compose_loops(geom: &LatticeGeometry, loops: &[LoopSpec]) -> Result<LoopProduct> {
    let first = loops
        .first()
        .ok_or_else(|| Error::InvalidInput("no loops to compose".into()))?;
    let mut covered = BTreeSet::new();
    let (mut x0, mut y0, mut x1, mut y1) = (first.x, first.y, 0, 0);
    for c in loops {
        for p in geom.loop_enclosed_plaquettes(c)? {
            if !covered.insert(p) {
                let (x, y) = geom.plaquette_coords(p);
                return Err(Error::InvalidInput(format!(
                    "sub-loops overlap at plaquette ({x}, {y})"
                )));
            }
        }
        x0 = x0.min(c.x);
        y0 = y0.min(c.y);
        x1 = x1.max(c.x + c.width);
        y1 = y1.max(c.y + c.height);
    }
    let outer = LoopSpec::new(x0, y0, x1 - x0, y1 - y0);
    if covered.len() != outer.area() {
        return Err(Error::InvalidInput(format!(
            "sub-loops leave {} of {} plaquettes of the {}x{} rectangle uncovered",
            outer.area() - covered.len(),
            outer.area(),
            outer.width,
            outer.height
        )));
    }
    Ok(LoopProduct {
        outer,
        parts: loops.to_vec(),
    })
}

/// One control and the loop links it is entangled with, grouped by distance.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlGroup {
    pub control: usize,
    pub sets: Vec<DistanceSet>,
}

/// Which controls read out a loop, and in which distance sets the links are
/// entangled.
#[derive(Clone, Debug, PartialEq)]
pub struct WilsonPlan {
    pub target: LoopSpec,
    pub groups: Vec<ControlGroup>,
}

fn is_odd_square(c: &LoopSpec) -> bool {
    c.width == c.height && c.width % 2 == 1
}

impl WilsonPlan {
    /// A single control at the center of an odd square loop.
    pub fn native(geom: &LatticeGeometry, c: &LoopSpec) -> Result<Self> {
        geom.check_loop(c)?;
        if !is_odd_square(c) {
            return Err(Error::InvalidInput(format!(
                "a {}x{} loop has no central control; compose it from odd square loops",
                c.width, c.height
            )));
        }
        let control = geom.loop_center_control(c)?;
        Ok(Self {
            target: *c,
            groups: vec![ControlGroup {
                control,
                sets: geom.distance_sets(c, control)?,
            }],
        })
    }

    /// One control per sub-loop of a tiling.
    pub fn composed(geom: &LatticeGeometry, product: &LoopProduct) -> Result<Self> {
        let groups = product
            .parts
            .iter()
            .map(|c| Ok(Self::native(geom, c)?.groups.remove(0)))
            .collect::<Result<_>>()?;
        Ok(Self {
            target: product.outer,
            groups,
        })
    }

    /// Native for odd squares, otherwise tiled by 1x1 loops.
    pub fn auto(geom: &LatticeGeometry, c: &LoopSpec) -> Result<Self> {
        geom.check_loop(c)?;
        if is_odd_square(c) {
            return Self::native(geom, c);
        }
        let tiles: Vec<LoopSpec> = (c.y..c.y + c.height)
            .flat_map(|y| (c.x..c.x + c.width).map(move |x| LoopSpec::unit(x, y)))
            .collect();
        Self::composed(geom, &compose_loops(geom, &tiles)?)
    }

    pub fn num_sets(&self) -> usize {
        self.groups.iter().map(|g| g.sets.len()).sum()
    }

    /// Entangling sequence: per distance set, a link layer, then the
    /// exchange between the control and that set conjugated by Vy~(pi/4);
    /// finally the control phase correction.
    pub fn entangler(&self, layout: &FullLayout) -> Result<GateSeq> {
        let mut seq = GateSeq::new(layout.num_qubits());
        for g in &self.groups {
            let c = layout.control_qubit(g.control);
            let mut n = 0usize;
            for set in &g.sets {
                n += set.links.len();
                seq.push(Gate::Rotation {
                    target: Target::Links,
                    axis: Axis::X,
                    angles: set.links.iter().map(|&l| (l, FRAC_PI_4)).collect(),
                })?;
                seq.push(Gate::Rotation {
                    target: Target::Controls,
                    axis: Axis::Y,
                    angles: vec![(c, FRAC_PI_4)],
                })?;
                seq.push(Gate::Interaction {
                    pairs: set.links.iter().map(|&l| (c, l, FRAC_PI_4)).collect(),
                })?;
                seq.push(Gate::Rotation {
                    target: Target::Controls,
                    axis: Axis::Y,
                    angles: vec![(c, -FRAC_PI_4)],
                })?;
            }
            seq.push(Gate::Rotation {
                target: Target::Controls,
                axis: Axis::Z,
                angles: vec![(c, -FRAC_PI_4 * n as f64)],
            })?;
        }
        Ok(seq)
    }
}

/// Entangles the plan's controls with the loop links, reads
/// <prod sx~(controls)> and undoes the entangler. The controls must start
/// in |in>.
pub fn measure_wilson_stator(
    state: &mut QubitRegister,
    layout: &FullLayout,
    plan: &WilsonPlan,
) -> Result<f64> {
    let controls: Vec<usize> = plan
        .groups
        .iter()
        .map(|g| layout.control_qubit(g.control))
        .collect();
    for &c in &controls {
        let x = state.expectation_pauli(&PauliString::single(c, Axis::X))?;
        if (1.0 - x).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "control qubit {c} is not in |in> (<sx> = {x})"
            )));
        }
    }
    let ent = plan.entangler(layout)?;
    ent.apply(state)?;
    let value = state.expectation_pauli(&PauliString::uniform(Axis::X, controls)?);
    ent.inverse()?.apply(state)?;
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiling_checks() {
        let g = LatticeGeometry::new(3, 3).unwrap();
        let quads = [
            LoopSpec::unit(0, 0),
            LoopSpec::unit(1, 0),
            LoopSpec::unit(0, 1),
            LoopSpec::unit(1, 1),
        ];
        let prod = compose_loops(&g, &quads).unwrap();
        assert_eq!(prod.outer, LoopSpec::new(0, 0, 2, 2));
        assert_eq!(
            prod.operator(&g).unwrap(),
            g.loop_operator(&prod.outer).unwrap()
        );
        assert!(compose_loops(&g, &quads[..3]).is_err());
        assert!(compose_loops(&g, &[quads[0], LoopSpec::new(0, 0, 2, 1), quads[2], quads[3]]).is_err());
    }

    #[test]
    fn plan_sizes() {
        let g = LatticeGeometry::new(3, 3).unwrap();
        let plan = WilsonPlan::native(&g, &LoopSpec::new(0, 0, 3, 3)).unwrap();
        assert_eq!(plan.num_sets(), 2);
        assert_eq!(plan.groups[0].control, 4);
        assert!(WilsonPlan::native(&g, &LoopSpec::new(0, 0, 2, 2)).is_err());
        assert_eq!(WilsonPlan::auto(&g, &LoopSpec::new(0, 0, 2, 2)).unwrap().groups.len(), 4);
    }
}
