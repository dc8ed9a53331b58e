use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InteractionKind {
    /// Infinite-range coupling, |f| = 1.
    Cavity,
    /// Bound-state coupling decaying as e^{-r/L}/sqrt(r/L).
    PhotonicCrystal,
}

impl FromStr for InteractionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cavity" => Ok(Self::Cavity),
            "crystal" | "photonic-crystal" => Ok(Self::PhotonicCrystal),
            _ => Err(Error::InvalidInput(format!(
                "unknown interaction kind `{s}` (expected cavity or crystal)"
            ))),
        }
    }
}

/// Photon-mediated spin-spin interaction H = J sum_{m<n} f(r_mn) sx sx.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionModel {
    pub kind: InteractionKind,
    /// Overall strength (energy units).
    pub j: f64,
    /// Bound-state range in lattice units (crystal only).
    pub range: f64,
    pub cooperativity: f64,
    /// Distance at which f is normalized to 1, in lattice units. The
    /// designed control-link separation is 1/2.
    pub nn_distance: f64,
}

impl InteractionModel {
    pub fn cavity(j: f64, cooperativity: f64) -> Result<Self> {
        let m = Self {
            kind: InteractionKind::Cavity,
            j,
            range: f64::INFINITY,
            cooperativity,
            nn_distance: 0.5,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn crystal(j: f64, range: f64, cooperativity: f64) -> Result<Self> {
        let m = Self {
            kind: InteractionKind::PhotonicCrystal,
            j,
            range,
            cooperativity,
            nn_distance: 0.5,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_nn_distance(mut self, d: f64) -> Result<Self> {
        self.nn_distance = d;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j > 0.0) {
            return Err(Error::InvalidInput(format!("J must be positive, got {}", self.j)));
        }
        if !(self.cooperativity > 0.0) {
            return Err(Error::InvalidInput(format!(
                "cooperativity must be positive, got {}",
                self.cooperativity
            )));
        }
        if self.kind == InteractionKind::PhotonicCrystal && !(self.range > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bound-state range must be positive, got {}",
                self.range
            )));
        }
        if !(self.nn_distance > 0.0) {
            return Err(Error::InvalidInput(format!(
                "normalization distance must be positive, got {}",
                self.nn_distance
            )));
        }
        Ok(())
    }
}

fn crystal_shape(r: f64, range: f64) -> f64 {
    let x = r / range;
    (-x).exp() / x.sqrt()
}

/// Unnormalized crystal profile e^{-r/L}/sqrt(r/L).
pub fn crystal_profile_raw(r: f64, range: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!(
            "crystal coupling is singular at r = {r}"
        )));
    }
    Ok(crystal_shape(r, range))
}

/// |f(r)|, normalized to 1 at the model's NN distance.
pub fn coupling_profile(model: &InteractionModel, r: f64) -> Result<f64> {
    match model.kind {
        InteractionKind::Cavity => {
            if r < 0.0 {
                return Err(Error::InvalidInput(format!("negative distance {r}")));
            }
            Ok(1.0)
        }
        InteractionKind::PhotonicCrystal => Ok(crystal_profile_raw(r, model.range)?
            / crystal_shape(model.nn_distance, model.range)),
    }
}
