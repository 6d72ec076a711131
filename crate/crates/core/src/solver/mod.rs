//! RK4 integration of the nonlocal Cauchy problem with diagnostics, the
//! wave-breaking monitor and a manufactured-solution harness.

mod config;
mod integrate;
pub mod mms;
mod monitor;

pub use config::{Forcing, SimConfig, TimeStep};
pub use integrate::{
    advection_speed, cfl_time_step, integrate, step_rk4, DiagnosticsRecord, Stepper, Termination,
    Trajectory,
};
pub use monitor::{
    breaking_monitor, h1_growth_check, BreakingReport, BreakingThresholds, H1GrowthReport, Verdict,
    H1_FIT_FLOOR,
};
