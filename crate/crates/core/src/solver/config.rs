use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeffs::GeneralCoefficients;
use crate::error::{Error, Result};
use crate::spectral::{DealiasRule, Grid};

/// Additive source term `f(t, x)` on the right-hand side.
pub trait Forcing: Send + Sync {
    /// Writes `f(t, x_i)` for every grid point into `out`.
    fn eval(&self, t: f64, grid: &Grid, out: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeStep {
    Fixed(f64),
    /// Courant number; `dt = cfl dx / (max |a1 + a2 u + a3 u^2| + 1)`.
    Cfl(f64),
}

#[derive(Clone)]
pub struct SimConfig {
    pub grid: Grid,
    pub coefficients: GeneralCoefficients,
    pub t_end: f64,
    pub time_step: TimeStep,
    pub dealias: DealiasRule,
    pub snapshot_stride: usize,
    pub forcing: Option<Arc<dyn Forcing>>,
    /// Stop once `min u_x` falls to this (negative) level.
    pub breaking_stop: Option<f64>,
    /// Order `s` of the reported Sobolev norm.
    pub hs_order: f64,
}

impl fmt::Debug for SimConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimConfig")
            .field("grid", &self.grid)
            .field("coefficients", &self.coefficients)
            .field("t_end", &self.t_end)
            .field("time_step", &self.time_step)
            .field("dealias", &self.dealias)
            .field("snapshot_stride", &self.snapshot_stride)
            .field("forcing", &self.forcing.is_some())
            .field("breaking_stop", &self.breaking_stop)
            .field("hs_order", &self.hs_order)
            .finish()
    }
}

impl SimConfig {
    pub fn new(
        grid: Grid,
        coefficients: GeneralCoefficients,
        t_end: f64,
        time_step: TimeStep,
    ) -> Self {
        Self {
            grid,
            coefficients,
            t_end,
            time_step,
            dealias: DealiasRule::TwoThirds,
            snapshot_stride: 1,
            forcing: None,
            breaking_stop: None,
            hs_order: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        match self.time_step {
            TimeStep::Fixed(dt) if !(dt.is_finite() && dt > 0.0) => {
                return bad(format!("dt must be positive, got {dt}"))
            }
            TimeStep::Cfl(c) if !(c > 0.0 && c <= 1.0) => {
                return bad(format!("cfl must lie in (0, 1], got {c}"))
            }
            _ => {}
        }
        if self.snapshot_stride == 0 {
            return bad("snapshot_stride must be at least 1".into());
        }
        if !self.coefficients.is_finite() {
            return bad("coefficients must be finite".into());
        }
        if !self.hs_order.is_finite() {
            return bad("hs_order must be finite".into());
        }
        if let Some(s) = self.breaking_stop {
            if !(s.is_finite() && s < 0.0) {
                return bad(format!("breaking_stop must be negative, got {s}"));
            }
        }
        Ok(())
    }
}
