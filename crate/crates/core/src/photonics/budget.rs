//! Trotter versus gate-error budget.
//!
//! eps(M) = a T^{k+1} / M^k + M b C^{-gamma}
//!
//! with k the Trotter order, a the Trotter prefactor, b the per-step gate
//! error at C = 1 and gamma the per-step error exponent in the cooperativity.
//! Minimizing over M gives eps_min ~ T C^{-gamma k/(k+1)}, so the longest
//! run under an error cap scales as T_max ~ C^{gamma k/(k+1)}.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetModel {
    /// Trotter order k (1 or 2).
    pub order: u32,
    pub trotter_coeff: f64,
    pub gate_coeff: f64,
    /// gamma; 1 makes T_max ~ C^{2/3} at second order.
    pub gate_exponent: f64,
    /// Error cap defining T_max.
    pub error_cap: f64,
    /// Largest step count considered.
    pub max_steps: u64,
}

impl Default for BudgetModel {
    fn default() -> Self {
        Self {
            order: 2,
            trotter_coeff: 1.0,
            gate_coeff: 1e-3,
            gate_exponent: 1.0,
            error_cap: 0.1,
            max_steps: 1_000_000_000,
        }
    }
}

impl BudgetModel {
    pub fn validate(&self) -> Result<()> {
        if self.order != 1 && self.order != 2 {
            return Err(Error::InvalidInput(format!(
                "Trotter order must be 1 or 2, got {}",
                self.order
            )));
        }
        for (name, v) in [
            ("trotter_coeff", self.trotter_coeff),
            ("gate_coeff", self.gate_coeff),
            ("gate_exponent", self.gate_exponent),
            ("error_cap", self.error_cap),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("max_steps must be positive".into()));
        }
        Ok(())
    }

    pub fn trotter_error(&self, t: f64, m: u64) -> f64 {
        let k = self.order as i32;
        self.trotter_coeff * t.powi(k + 1) / (m as f64).powi(k)
    }

    pub fn gate_error(&self, c: f64, m: u64) -> f64 {
        m as f64 * self.gate_coeff * c.powf(-self.gate_exponent)
    }

    pub fn total_error(&self, c: f64, t: f64, m: u64) -> f64 {
        self.trotter_error(t, m) + self.gate_error(c, m)
    }

    /// Integer M minimizing the total error, and that error.
    pub fn optimum(&self, c: f64, t: f64) -> (u64, f64) {
        let k = self.order as f64;
        let per_step = self.gate_coeff * c.powf(-self.gate_exponent);
        let m_cont = if per_step == 0.0 {
            f64::INFINITY
        } else {
            (k * self.trotter_coeff * t.powf(k + 1.0) / per_step).powf(1.0 / (k + 1.0))
        };
        let lo = m_cont.floor().clamp(1.0, self.max_steps as f64) as u64;
        let hi = (lo + 1).min(self.max_steps);
        [lo, hi]
            .into_iter()
            .map(|m| (m, self.total_error(c, t, m)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("two candidates")
    }

    /// Largest T with minimal error at most the cap, by bisection in log T.
    pub fn t_max(&self, c: f64) -> f64 {
        let within = |t: f64| self.optimum(c, t).1 <= self.error_cap;
        let (mut lo, mut hi) = (1e-12f64, 1.0f64);
        while within(hi) && hi < 1e12 {
            lo = hi;
            hi *= 2.0;
        }
        if within(hi) {
            return hi;
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if within(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi / lo - 1.0 < 1e-13 {
                break;
            }
        }
        lo
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetResult {
    pub cooperativity: f64,
    pub optimal_steps: u64,
    pub min_error: f64,
    pub trotter_error: f64,
    pub gate_error: f64,
    pub t_max: f64,
}

pub fn error_budget(c: f64, t_target: f64, model: &BudgetModel) -> Result<BudgetResult> {
    model.validate()?;
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("cooperativity must be positive, got {c}")));
    }
    if !(t_target > 0.0 && t_target.is_finite()) {
        return Err(Error::InvalidInput(format!("target time must be positive, got {t_target}")));
    }
    let (m, eps) = model.optimum(c, t_target);
    Ok(BudgetResult {
        cooperativity: c,
        optimal_steps: m,
        min_error: eps,
        trotter_error: model.trotter_error(t_target, m),
        gate_error: model.gate_error(c, m),
        t_max: model.t_max(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_steps_quarters_second_order_term() {
        let m = BudgetModel::default();
        let r = m.trotter_error(1.3, 40) / m.trotter_error(1.3, 80);
        assert!((r - 4.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_cooperativity_hits_step_cap() {
        let m = BudgetModel {
            max_steps: 1000,
            ..Default::default()
        };
        let r = error_budget(f64::INFINITY, 1.0, &m).unwrap();
        assert_eq!(r.optimal_steps, 1000);
        assert_eq!(r.gate_error, 0.0);
        assert!((r.min_error - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn optimum_is_local_minimum() {
        let m = BudgetModel::default();
        let (s, e) = m.optimum(100.0, 2.0);
        assert!(e <= m.total_error(100.0, 2.0, s + 1));
        assert!(s == 1 || e <= m.total_error(100.0, 2.0, s - 1));
    }

    #[test]
    fn t_max_meets_cap() {
        let m = BudgetModel::default();
        let t = m.t_max(50.0);
        assert!(m.optimum(50.0, t).1 <= m.error_cap);
        assert!(m.optimum(50.0, t * 1.001).1 > m.error_cap);
    }
}
