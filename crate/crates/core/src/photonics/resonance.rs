//! Zeeman-gradient addressing: which atom pairs a sideband schedule makes
//! resonant.
//!
//! A pair (m, n) exchanges an excitation through a Raman process that
//! combines the carrier drive with one sideband alpha. It is resonant when
//! |w_m - w_n| matches |wbar_alpha| within the resolution. Processes that
//! use two sidebands are higher order and not modeled.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{LatticeGeometry, Point};

/// Zeeman shift w(x, y) = g (p x + q y).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientSpec {
    pub p: f64,
    pub q: f64,
    /// Shift per lattice constant (frequency units).
    pub g: f64,
}

impl GradientSpec {
    pub fn new(p: f64, q: f64, g: f64) -> Result<Self> {
        if p == 0.0 && q == 0.0 {
            return Err(Error::InvalidInput("gradient direction (p, q) is zero".into()));
        }
        if !(g > 0.0) {
            return Err(Error::InvalidInput(format!("gradient scale must be positive, got {g}")));
        }
        Ok(Self { p, q, g })
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            g: self.g * factor,
            ..self
        }
    }
}

pub fn zeeman_shift(grad: &GradientSpec, pos: Point) -> f64 {
    grad.g * (grad.p * pos.x + grad.q * pos.y)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sideband {
    pub amplitude: f64,
    /// Detuning from the carrier.
    pub detuning: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SidebandSchedule {
    pub sidebands: Vec<Sideband>,
    /// Frequency resolution: detunings closer than this are indistinguishable.
    pub resolution: f64,
}

impl SidebandSchedule {
    pub fn new(sidebands: Vec<Sideband>, resolution: f64) -> Result<Self> {
        if !(resolution >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "resolution must be non-negative, got {resolution}"
            )));
        }
        for (i, a) in sidebands.iter().enumerate() {
            for b in &sidebands[..i] {
                if (a.detuning - b.detuning).abs() <= resolution {
                    return Err(Error::InvalidInput(format!(
                        "sidebands at {} and {} are not resolved",
                        a.detuning, b.detuning
                    )));
                }
            }
        }
        Ok(Self {
            sidebands,
            resolution,
        })
    }

    pub fn empty(resolution: f64) -> Self {
        Self {
            sidebands: Vec::new(),
            resolution,
        }
    }
}

/// Two sidebands at g|p|/2 and g|q|/2: the shift differences of a control
/// and its horizontal and vertical links.
pub fn canonical_nn_schedule(grad: &GradientSpec, resolution: f64) -> Result<SidebandSchedule> {
    let h = grad.g * grad.p.abs() / 2.0;
    let v = grad.g * grad.q.abs() / 2.0;
    if h <= resolution || v <= resolution {
        return Err(Error::DegenerateGradient(format!(
            "p = {} or q = {} leaves a hopping direction without a Zeeman splitting",
            grad.p, grad.q
        )));
    }
    if (h - v).abs() <= resolution {
        return Err(Error::DegenerateGradient(format!(
            "|p| = {} and |q| = {} make horizontal and vertical pairs indistinguishable",
            grad.p.abs(),
            grad.q.abs()
        )));
    }
    SidebandSchedule::new(
        vec![
            Sideband {
                amplitude: 1.0,
                detuning: h,
            },
            Sideband {
                amplitude: 1.0,
                detuning: v,
            },
        ],
        resolution,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomKind {
    Link,
    Control,
}

/// Atoms in register order: links first, then one control per plaquette.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub index: usize,
    pub kind: AtomKind,
    pub position: Point,
}

pub fn atoms(geom: &LatticeGeometry) -> Vec<Atom> {
    let links = (0..geom.num_links()).map(|l| Atom {
        index: l,
        kind: AtomKind::Link,
        position: geom.link_position(l),
    });
    let controls = (0..geom.num_controls()).map(|p| Atom {
        index: geom.num_links() + p,
        kind: AtomKind::Control,
        position: geom.control_position(p),
    });
    links.chain(controls).collect()
}

/// Whether (a, b) is a control and one of the four links of its plaquette.
pub fn is_nn_pair(geom: &LatticeGeometry, a: usize, b: usize) -> bool {
    let nl = geom.num_links();
    let (c, l) = match (a >= nl, b >= nl) {
        (true, false) => (a - nl, b),
        (false, true) => (b - nl, a),
        _ => return false,
    };
    geom.link_plaquettes(l).contains(&c)
}

fn slack(target: f64) -> f64 {
    1e-12 * target.abs().max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairResonance {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    /// |w_a - w_b|
    pub splitting: f64,
    /// Smallest | |w_a - w_b| - |wbar_alpha| | over sidebands (infinite for
    /// an empty schedule).
    pub mismatch: f64,
    pub resonant: bool,
    pub nn: bool,
}

/// Classification of every atom pair a < b.
pub fn resonant_pairs(
    geom: &LatticeGeometry,
    grad: &GradientSpec,
    schedule: &SidebandSchedule,
    resolution: f64,
) -> Vec<PairResonance> {
    let atoms = atoms(geom);
    let n = atoms.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let atoms = &atoms;
            (i + 1..n).map(move |k| {
                let (a, b) = (atoms[i], atoms[k]);
                let splitting =
                    (zeeman_shift(grad, a.position) - zeeman_shift(grad, b.position)).abs();
                let (mismatch, resonant) = schedule.sidebands.iter().fold(
                    (f64::INFINITY, false),
                    |(m, r), sb| {
                        let d = (splitting - sb.detuning.abs()).abs();
                        (m.min(d), r || d <= resolution + slack(sb.detuning))
                    },
                );
                PairResonance {
                    a: a.index,
                    b: b.index,
                    distance: a.position.distance(b.position),
                    splitting,
                    mismatch,
                    resonant,
                    nn: is_nn_pair(geom, a.index, b.index),
                }
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Collision {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    pub splitting: f64,
    /// The NN target frequency it collides with.
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionReport {
    /// Smallest distance between an NN target frequency and the splitting
    /// of any other pair.
    pub min_gap: f64,
    pub collisions: Vec<Collision>,
    /// Largest L for which an L x L lattice is collision-free, up to the
    /// scan limit; `None` if no size up to the limit collides.
    pub max_safe_size: Option<usize>,
    pub scan_limit: usize,
}

impl CollisionReport {
    pub fn nn_only(&self) -> bool {
        self.collisions.is_empty()
    }

    pub fn to_csv(&self, geom: &LatticeGeometry) -> String {
        let mut out = String::from("a,b,kind_a,kind_b,distance,splitting,target\n");
        let kind = |i: usize| if i < geom.num_links() { "link" } else { "control" };
        for c in &self.collisions {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.17e},{:.17e},{:.17e}",
                c.a,
                c.b,
                kind(c.a),
                kind(c.b),
                c.distance,
                c.splitting,
                c.target
            );
        }
        out
    }
}

fn nn_targets(grad: &GradientSpec) -> [f64; 2] {
    [grad.g * grad.p.abs() / 2.0, grad.g * grad.q.abs() / 2.0]
}

fn scan_collisions(
    geom: &LatticeGeometry,
    grad: &GradientSpec,
    resolution: f64,
    stop_at_first: bool,
) -> (f64, Vec<Collision>) {
    let targets = nn_targets(grad);
    let atoms = atoms(geom);
    let mut min_gap = f64::INFINITY;
    let mut found = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        let wa = zeeman_shift(grad, a.position);
        for b in &atoms[i + 1..] {
            if is_nn_pair(geom, a.index, b.index) {
                continue;
            }
            let splitting = (wa - zeeman_shift(grad, b.position)).abs();
            for &t in &targets {
                let gap = (splitting - t).abs();
                min_gap = min_gap.min(gap);
                if gap <= resolution + slack(t) {
                    found.push(Collision {
                        a: a.index,
                        b: b.index,
                        distance: a.position.distance(b.position),
                        splitting,
                        target: t,
                    });
                    if stop_at_first {
                        return (min_gap, found);
                    }
                    break;
                }
            }
        }
    }
    (min_gap, found)
}

/// Default largest lattice size tried when searching for the safe size.
pub const DEFAULT_SCAN_LIMIT: usize = 16;

/// Collisions of the NN target frequencies with other pairs.
pub fn collision_report(
    geom: &LatticeGeometry,
    grad: &GradientSpec,
    resolution: f64,
) -> Result<CollisionReport> {
    collision_report_with_limit(geom, grad, resolution, DEFAULT_SCAN_LIMIT)
}

pub fn collision_report_with_limit(
    geom: &LatticeGeometry,
    grad: &GradientSpec,
    resolution: f64,
    scan_limit: usize,
) -> Result<CollisionReport> {
    let (min_gap, collisions) = scan_collisions(geom, grad, resolution, false);
    let mut max_safe_size = None;
    for l in 1..=scan_limit {
        let g = LatticeGeometry::new(l, l)?;
        if !scan_collisions(&g, grad, resolution, true).1.is_empty() {
            max_safe_size = Some(l - 1);
            break;
        }
    }
    Ok(CollisionReport {
        min_gap,
        collisions,
        max_safe_size,
        scan_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(l: usize) -> LatticeGeometry {
        LatticeGeometry::new(l, l).unwrap()
    }

    #[test]
    fn shifts() {
        let g = GradientSpec::new(1.0, 2f64.sqrt(), 1.0).unwrap();
        assert_eq!(zeeman_shift(&g, Point { x: 0.0, y: 0.0 }), 0.0);
        assert_eq!(zeeman_shift(&g, Point { x: 1.0, y: 0.0 }), 1.0);
        assert!(GradientSpec::new(0.0, 0.0, 1.0).is_err());
        assert!(GradientSpec::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn degenerate_schedule() {
        let g = GradientSpec::new(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            canonical_nn_schedule(&g, 1e-9),
            Err(Error::DegenerateGradient(_))
        ));
        let g = GradientSpec::new(1.0, 0.0, 1.0).unwrap();
        assert!(canonical_nn_schedule(&g, 1e-9).is_err());
    }

    #[test]
    fn nn_only_resonances() {
        let g = GradientSpec::new(1.0, 2f64.sqrt(), 1.0).unwrap();
        let s = canonical_nn_schedule(&g, 1e-6).unwrap();
        let lat = geom(2);
        let pairs = resonant_pairs(&lat, &g, &s, 1e-6);
        assert_eq!(pairs.iter().filter(|p| p.resonant).count(), 16);
        assert!(pairs.iter().all(|p| p.resonant == p.nn));
    }

    #[test]
    fn empty_schedule_has_no_resonances() {
        let g = GradientSpec::new(1.0, 2f64.sqrt(), 1.0).unwrap();
        let pairs = resonant_pairs(&geom(2), &g, &SidebandSchedule::empty(1e-6), 1e-6);
        assert!(pairs.iter().all(|p| !p.resonant && p.mismatch.is_infinite()));
    }

    #[test]
    fn limits_of_collision_report() {
        let g = GradientSpec::new(1.0, 2f64.sqrt(), 1.0).unwrap();
        let r = collision_report(&geom(4), &g, 0.0).unwrap();
        assert!(r.nn_only() && r.min_gap > 0.0);
        let r = collision_report(&geom(2), &g, f64::INFINITY).unwrap();
        assert_eq!(r.max_safe_size, Some(0));
    }
}
