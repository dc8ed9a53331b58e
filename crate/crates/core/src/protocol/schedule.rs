//! Linear adiabatic ramps and the stroboscopic runner.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauge_dual::TrotterOrder;
use crate::lattice::{LatticeGeometry, LoopSpec};

use super::engine::{make_engine, Engine, EngineKind, InitialState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Start in |0_E> with lambda_E = 1 and ramp lambda_B from 0.
    ElectricStart,
    /// Start in |0_B> with lambda_B = 1 and ramp lambda_E from 0.
    MagneticStart,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Self::ElectricStart => "electric",
            Self::MagneticStart => "magnetic",
        }
    }

    pub fn initial_state(self) -> InitialState {
        match self {
            Self::ElectricStart => InitialState::Electric,
            Self::MagneticStart => InitialState::Magnetic,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "electric" | "electric-start" => Ok(Self::ElectricStart),
            "magnetic" | "magnetic-start" => Ok(Self::MagneticStart),
            _ => Err(Error::InvalidInput(format!(
                "unknown direction `{s}` (expected electric or magnetic)"
            ))),
        }
    }
}

/// Where in each step the ramped coupling is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SampleTime {
    #[default]
    Midpoint,
    Start,
}

impl FromStr for SampleTime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Self::Midpoint),
            "start" => Ok(Self::Start),
            _ => Err(Error::InvalidInput(format!(
                "unknown sample time `{s}` (expected midpoint or start)"
            ))),
        }
    }
}

/// Sign of the rotation angles in W_E and W_B. `Standard` gives
/// exp(-i tau H); `Reversed` gives exp(+i tau H).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignConvention {
    #[default]
    Standard,
    Reversed,
}

impl FromStr for SignConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "reversed" => Ok(Self::Reversed),
            _ => Err(Error::InvalidInput(format!(
                "unknown sign convention `{s}` (expected standard or reversed)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub direction: Direction,
    pub total_time: f64,
    pub steps: usize,
    /// lambda_B/lambda_E at the end (electric start) or lambda_E/lambda_B
    /// (magnetic start).
    pub final_ratio: f64,
    pub order: TrotterOrder,
    pub sample: SampleTime,
    pub sign: SignConvention,
}

impl Schedule {
    /// Linear ramp, first-order steps, midpoint sampling.
    pub fn new(direction: Direction, total_time: f64, steps: usize, final_ratio: f64) -> Result<Self> {
        let s = Self {
            direction,
            total_time,
            steps,
            final_ratio,
            order: TrotterOrder::First,
            sample: SampleTime::Midpoint,
            sign: SignConvention::Standard,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_order(mut self, order: TrotterOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_sample(mut self, sample: SampleTime) -> Self {
        self.sample = sample;
        self
    }

    pub fn with_sign(mut self, sign: SignConvention) -> Self {
        self.sign = sign;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_time >= 0.0 && self.total_time.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "total time must be finite and non-negative, got {}",
                self.total_time
            )));
        }
        if self.steps == 0 {
            return Err(Error::InvalidInput("at least one step is required".into()));
        }
        if !(self.final_ratio >= 0.0 && self.final_ratio.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "final ratio must be finite and non-negative, got {}",
                self.final_ratio
            )));
        }
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        self.total_time / self.steps as f64
    }

    /// (lambda_E, lambda_B) at ramp fraction s = t/T.
    pub fn couplings_at_fraction(&self, s: f64) -> (f64, f64) {
        let r = self.final_ratio * s;
        match self.direction {
            Direction::ElectricStart => (1.0, r),
            Direction::MagneticStart => (r, 1.0),
        }
    }

    /// Couplings used during step k (0-based).
    pub fn step_couplings(&self, k: usize) -> (f64, f64) {
        let offset = match self.sample {
            SampleTime::Midpoint => 0.5,
            SampleTime::Start => 0.0,
        };
        self.couplings_at_fraction((k as f64 + offset) / self.steps as f64)
    }

    /// Couplings at the end of the ramp.
    pub fn final_couplings(&self) -> (f64, f64) {
        self.couplings_at_fraction(1.0)
    }

    /// Signed step length after the sign convention.
    pub fn signed_tau(&self) -> f64 {
        match self.sign {
            SignConvention::Standard => self.tau(),
            SignConvention::Reversed => -self.tau(),
        }
    }
}

/// What to record along a run.
#[derive(Clone, Debug, Default)]
pub struct Observables {
    pub loops: Vec<LoopSpec>,
    pub energy: bool,
    pub gauge: bool,
    /// Record every this many steps; 0 records only the initial and final
    /// states.
    pub every: usize,
}

impl Observables {
    pub fn loops(loops: Vec<LoopSpec>) -> Self {
        Self {
            loops,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    pub lambda_e: f64,
    pub lambda_b: f64,
    pub wilson: Vec<f64>,
    pub energy: Option<f64>,
    /// max over sites of 1 - <A(x)>
    pub gauge_violation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub schedule: Schedule,
    pub engine: EngineKind,
    pub records: Vec<StepRecord>,
}

impl Trajectory {
    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("trajectory holds the initial record")
    }

    pub fn max_gauge_violation(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.gauge_violation)
            .reduce(f64::max)
    }
}

fn record(
    engine: &dyn Engine,
    schedule: &Schedule,
    obs: &Observables,
    step: usize,
) -> Result<StepRecord> {
    let s = step as f64 / schedule.steps as f64;
    let (lambda_e, lambda_b) = schedule.couplings_at_fraction(s);
    Ok(StepRecord {
        step,
        time: s * schedule.total_time,
        lambda_e,
        lambda_b,
        wilson: obs
            .loops
            .iter()
            .map(|c| engine.wilson(c))
            .collect::<Result<_>>()?,
        energy: if obs.energy {
            Some(engine.energy(lambda_e, lambda_b)?)
        } else {
            None
        },
        gauge_violation: if obs.gauge {
            Some(engine.max_gauge_violation()?)
        } else {
            None
        },
    })
}

/// Resets the engine to the schedule's initial state and runs all steps.
pub fn run_adiabatic(
    engine: &mut dyn Engine,
    schedule: &Schedule,
    obs: &Observables,
) -> Result<Trajectory> {
    schedule.validate()?;
    for c in &obs.loops {
        engine.geometry().check_loop(c)?;
    }
    engine.reset(schedule.direction.initial_state())?;
    run_from_current(engine, schedule, obs)
}

/// Runs the schedule from whatever state the engine holds.
pub fn run_from_current(
    engine: &mut dyn Engine,
    schedule: &Schedule,
    obs: &Observables,
) -> Result<Trajectory> {
    let tau = schedule.signed_tau();
    let mut records = vec![record(engine, schedule, obs, 0)?];
    for k in 0..schedule.steps {
        let (le, lb) = schedule.step_couplings(k);
        engine.trotter_step(le, lb, tau, schedule.order)?;
        let done = k + 1;
        let due = obs.every > 0 && done % obs.every == 0;
        if due || done == schedule.steps {
            records.push(record(engine, schedule, obs, done)?);
        }
    }
    Ok(Trajectory {
        schedule: *schedule,
        engine: engine.kind(),
        records,
    })
}

/// Runs independent schedules in parallel, one fresh engine each; results
/// keep the input order.
pub fn adiabatic_sweep(
    geom: &LatticeGeometry,
    kind: EngineKind,
    schedules: &[Schedule],
    obs: &Observables,
) -> Vec<Result<Trajectory>> {
    schedules
        .par_iter()
        .map(|s| {
            let mut engine = make_engine(kind, geom)?;
            run_adiabatic(engine.as_mut(), s, obs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_endpoints() {
        let s = Schedule::new(Direction::ElectricStart, 1.0, 4, 2.0).unwrap();
        assert_eq!(s.step_couplings(0), (1.0, 0.25));
        assert_eq!(s.final_couplings(), (1.0, 2.0));
        let s = s.with_sample(SampleTime::Start);
        assert_eq!(s.step_couplings(0), (1.0, 0.0));
        let m = Schedule::new(Direction::MagneticStart, 1.0, 2, 3.0).unwrap();
        assert_eq!(m.step_couplings(1), (2.25, 1.0));
    }

    #[test]
    fn invalid_schedules() {
        assert!(Schedule::new(Direction::ElectricStart, 1.0, 0, 1.0).is_err());
        assert!(Schedule::new(Direction::ElectricStart, -1.0, 3, 1.0).is_err());
        assert!(Schedule::new(Direction::ElectricStart, 1.0, 3, -0.5).is_err());
    }

    #[test]
    fn record_cadence() {
        let g = LatticeGeometry::new(1, 1).unwrap();
        let mut e = make_engine(EngineKind::Dual, &g).unwrap();
        let s = Schedule::new(Direction::ElectricStart, 1.0, 10, 1.0).unwrap();
        let obs = Observables {
            loops: vec![LoopSpec::unit(0, 0)],
            every: 3,
            ..Default::default()
        };
        let t = run_adiabatic(e.as_mut(), &s, &obs).unwrap();
        let steps: Vec<usize> = t.records.iter().map(|r| r.step).collect();
        assert_eq!(steps, vec![0, 3, 6, 9, 10]);
    }
}
