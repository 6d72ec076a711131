use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{Forcing, SimConfig, TimeStep};
use crate::coeffs::GeneralCoefficients;
use crate::error::{Error, Result};
use crate::model_forms::RhsWorkspace;
use crate::spectral::{DealiasRule, Field, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub sup_u: f64,
    pub min_ux: f64,
    pub max_ux: f64,
    pub h1: f64,
    pub hs: f64,
    /// Trapezoidal accumulation of `max |u_x|^2` over the recorded times.
    pub breaking_integral: f64,
    pub ch_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    BreakingDetected,
    Nonfinite,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<DiagnosticsRecord>,
    /// Full fields at every record time.
    pub snapshots: Vec<(f64, Field)>,
    pub termination: Termination,
    pub steps: usize,
    pub final_time: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &Field {
        &self
            .snapshots
            .last()
            .expect("at least the initial snapshot")
            .1
    }
}

/// Owns the RK4 stage buffers for one grid.
pub struct Stepper {
    grid: Grid,
    rhs: RhsWorkspace,
    k: [Vec<f64>; 4],
    stage: Vec<f64>,
    force: Vec<f64>,
    spec: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n();
        Self {
            grid: grid.clone(),
            rhs: RhsWorkspace::new(grid),
            k: std::array::from_fn(|_| vec![0.0; n]),
            stage: vec![0.0; n],
            force: vec![0.0; n],
            spec: vec![Complex64::default(); n],
            scratch: vec![Complex64::default(); grid.scratch_len()],
        }
    }

    fn eval(
        &mut self,
        which: usize,
        t: f64,
        g: &GeneralCoefficients,
        rule: DealiasRule,
        forcing: Option<&dyn Forcing>,
    ) -> Result<()> {
        let mut k = std::mem::take(&mut self.k[which]);
        self.rhs.rhs_into(&self.stage, g, rule, &mut k)?;
        if let Some(f) = forcing {
            f.eval(t, &self.grid, &mut self.force);
            if rule != DealiasRule::None {
                for (s, &v) in self.spec.iter_mut().zip(&self.force) {
                    *s = Complex64::new(v, 0.0);
                }
                self.grid.fft_in_place(&mut self.spec, &mut self.scratch);
                rule.apply(&self.grid, &mut self.spec);
                self.grid.ifft_in_place(&mut self.spec, &mut self.scratch);
                for (v, s) in self.force.iter_mut().zip(&self.spec) {
                    *v = s.re;
                }
            }
            for (kv, fv) in k.iter_mut().zip(&self.force) {
                *kv += fv;
            }
        }
        self.k[which] = k;
        Ok(())
    }

    /// One classical RK4 step in place. Returns `Error::NonFinite` if the
    /// update produced a non-finite sample; `u` is then left unchanged.
    pub fn step(
        &mut self,
        u: &mut [f64],
        t: f64,
        dt: f64,
        g: &GeneralCoefficients,
        rule: DealiasRule,
        forcing: Option<&dyn Forcing>,
    ) -> Result<()> {
        let n = self.grid.n();
        if u.len() != n {
            return Err(Error::GridMismatch {
                expected_n: n,
                expected_len: self.grid.length(),
                got_n: u.len(),
                got_len: self.grid.length(),
            });
        }
        let offsets = [0.0, 0.5, 0.5, 1.0];
        for (s, &offset) in offsets.iter().enumerate() {
            if s == 0 {
                self.stage.copy_from_slice(u);
            } else {
                let h = offset * dt;
                let prev = &self.k[s - 1];
                for ((st, &v), &p) in self.stage.iter_mut().zip(u.iter()).zip(prev) {
                    *st = v + h * p;
                }
            }
            self.eval(s, t + offset * dt, g, rule, forcing)?;
        }
        let [k1, k2, k3, k4] = &self.k;
        for i in 0..n {
            self.stage[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        if let Some(i) = self.stage.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        u.copy_from_slice(&self.stage);
        Ok(())
    }
}

/// Single RK4 step of the nonlocal form plus optional forcing.
pub fn step_rk4(
    u: &Field,
    t: f64,
    dt: f64,
    g: &GeneralCoefficients,
    rule: DealiasRule,
    forcing: Option<&dyn Forcing>,
) -> Result<Field> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let mut s = Stepper::new(u.grid());
    let mut v = u.samples().to_vec();
    s.step(&mut v, t, dt, g, rule, forcing)?;
    Ok(Field::from_samples_unchecked(u.grid(), v))
}

/// Largest advection speed `max |a1 + a2 u + a3 u^2|`.
pub fn advection_speed(u: &[f64], g: &GeneralCoefficients) -> f64 {
    u.iter()
        .map(|&v| (g.alpha1 + v * (g.alpha2 + v * g.alpha3)).abs())
        .fold(0.0, f64::max)
}

pub fn cfl_time_step(u: &[f64], g: &GeneralCoefficients, grid: &Grid, cfl: f64) -> f64 {
    cfl * grid.dx() / (advection_speed(u, g) + 1.0)
}

fn measure(u: &Field, t: f64, s: f64, integral: f64) -> DiagnosticsRecord {
    let ux = u.derivative();
    let h1 = u.hs_norm(1.0);
    DiagnosticsRecord {
        t,
        sup_u: u.linf(),
        min_ux: ux.min(),
        max_ux: ux.max(),
        h1,
        hs: u.hs_norm(s),
        breaking_integral: integral,
        ch_energy: h1 * h1,
    }
}

fn slope_sup_sq(r: &DiagnosticsRecord) -> f64 {
    let m = r.min_ux.abs().max(r.max_ux.abs());
    m * m
}

/// Advances `u0` to `cfg.t_end`, or until breaking or a non-finite state.
pub fn integrate(cfg: &SimConfig, u0: &Field) -> Result<Trajectory> {
    cfg.validate()?;
    cfg.grid.ensure_same(u0.grid())?;
    let grid = &cfg.grid;
    let g = &cfg.coefficients;
    let rule = cfg.dealias;
    let forcing = cfg.forcing.as_deref();

    let mut u = u0.dealias(rule).into_samples();
    let mut t = 0.0;
    let first = measure(
        &Field::from_samples_unchecked(grid, u.clone()),
        0.0,
        cfg.hs_order,
        0.0,
    );
    let mut records = vec![first];
    let mut snapshots = vec![(0.0, Field::from_samples_unchecked(grid, u.clone()))];
    let mut stepper = Stepper::new(grid);

    let fixed = match cfg.time_step {
        TimeStep::Fixed(dt) => {
            let steps = ((cfg.t_end / dt) - 1e-9).ceil().max(1.0) as usize;
            Some((steps, cfg.t_end / steps as f64))
        }
        TimeStep::Cfl(_) => None,
    };

    let mut steps = 0usize;
    let mut termination = Termination::Completed;
    loop {
        let done = match fixed {
            Some((n, _)) => steps >= n,
            None => t >= cfg.t_end * (1.0 - 1e-14),
        };
        if done {
            break;
        }
        let dt = match (fixed, cfg.time_step) {
            (Some((_, dt)), _) => dt,
            (None, TimeStep::Cfl(c)) => cfl_time_step(&u, g, grid, c).min(cfg.t_end - t),
            (None, TimeStep::Fixed(_)) => unreachable!(),
        };
        match stepper.step(&mut u, t, dt, g, rule, forcing) {
            Ok(()) => {}
            Err(Error::NonFinite(_)) => {
                termination = Termination::Nonfinite;
                break;
            }
            Err(e) => return Err(e),
        }
        steps += 1;
        t = match fixed {
            Some((_, dt)) => steps as f64 * dt,
            None => t + dt,
        };

        let last_step = match fixed {
            Some((n, _)) => steps >= n,
            None => t >= cfg.t_end * (1.0 - 1e-14),
        };
        let field = Field::from_samples_unchecked(grid, u.clone());
        let broke = cfg
            .breaking_stop
            .is_some_and(|stop| field.derivative().min() <= stop);
        if steps.is_multiple_of(cfg.snapshot_stride) || last_step || broke {
            let prev = records.last().expect("initial record");
            let mut rec = measure(&field, t, cfg.hs_order, 0.0);
            rec.breaking_integral = prev.breaking_integral
                + 0.5 * (t - prev.t) * (slope_sup_sq(prev) + slope_sup_sq(&rec));
            records.push(rec);
            snapshots.push((t, field));
        }
        if broke {
            termination = Termination::BreakingDetected;
            break;
        }
    }

    Ok(Trajectory {
        records,
        snapshots,
        termination,
        steps,
        final_time: t,
    })
}
