//! Manufactured solutions: pick `u*(t, x)`, add the forcing
//! `f = u*_t - rhs(u*)` and measure the solver error directly.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::config::{Forcing, SimConfig, TimeStep};
use super::integrate::integrate;
use crate::coeffs::GeneralCoefficients;
use crate::error::Result;
use crate::model_forms::RhsWorkspace;
use crate::spectral::{DealiasRule, Field, Grid};

/// Spatial shape `P(y)` of the travelling profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `cos(k y)`, band-limited.
    Cosine { mode: u32 },
    /// `exp(b (cos(k y) - 1))`; Fourier coefficients decay like
    /// `exp(-j^2 / 2b)`, so the profile is smooth but not band-limited.
    VonMises { mode: u32, concentration: f64 },
}

impl Profile {
    fn k(&self, length: f64) -> f64 {
        let m = match *self {
            Profile::Cosine { mode } | Profile::VonMises { mode, .. } => mode,
        };
        2.0 * PI * m as f64 / length
    }

    /// `(P(y), P'(y))`.
    fn eval(&self, y: f64, length: f64) -> (f64, f64) {
        let k = self.k(length);
        match *self {
            Profile::Cosine { .. } => ((k * y).cos(), -k * (k * y).sin()),
            Profile::VonMises {
                concentration: b, ..
            } => {
                let p = (b * ((k * y).cos() - 1.0)).exp();
                (p, -b * k * (k * y).sin() * p)
            }
        }
    }
}

/// `u*(t, x) = amplitude exp(-t / decay_time) P(x - speed t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManufacturedSpec {
    pub profile: Profile,
    pub amplitude: f64,
    pub speed: f64,
    pub decay_time: f64,
}

impl ManufacturedSpec {
    pub fn cosine(amplitude: f64) -> Self {
        Self {
            profile: Profile::Cosine { mode: 1 },
            amplitude,
            speed: 1.0,
            decay_time: 10.0,
        }
    }

    pub fn von_mises(amplitude: f64, concentration: f64) -> Self {
        Self {
            profile: Profile::VonMises {
                mode: 1,
                concentration,
            },
            amplitude,
            speed: 1.0,
            decay_time: 10.0,
        }
    }

    fn envelope(&self, t: f64) -> f64 {
        self.amplitude * (-t / self.decay_time).exp()
    }

    pub fn exact(&self, t: f64, x: f64, length: f64) -> f64 {
        self.envelope(t) * self.profile.eval(x - self.speed * t, length).0
    }

    pub fn exact_t(&self, t: f64, x: f64, length: f64) -> f64 {
        let (p, dp) = self.profile.eval(x - self.speed * t, length);
        self.envelope(t) * (-p / self.decay_time - self.speed * dp)
    }

    pub fn exact_field(&self, grid: &Grid, t: f64) -> Field {
        Field::from_fn(grid, |x| self.exact(t, x, grid.length()))
    }
}

/// Points on the fine grid used to evaluate the forcing's nonlinear part.
pub const FINE_POINTS: usize = 1024;

struct Cache {
    key: Option<(u64, usize)>,
    values: Vec<f64>,
}

/// Forcing `u*_t - rhs(u*)`; the right-hand side is evaluated on a fine grid
/// and subsampled so aliasing in the forcing does not pollute the measured
/// error.
pub struct ManufacturedForcing {
    spec: ManufacturedSpec,
    coefficients: GeneralCoefficients,
    cache: Mutex<Cache>,
}

impl ManufacturedForcing {
    pub fn new(spec: ManufacturedSpec, coefficients: GeneralCoefficients) -> Self {
        Self {
            spec,
            coefficients,
            cache: Mutex::new(Cache {
                key: None,
                values: Vec::new(),
            }),
        }
    }

    fn compute(&self, t: f64, grid: &Grid) -> Vec<f64> {
        let n = grid.n();
        let ratio = FINE_POINTS.div_ceil(n).max(1);
        let fine = Grid::new(n * ratio, grid.length()).expect("refined grid is valid");
        let u = self.spec.exact_field(&fine, t);
        let rhs = RhsWorkspace::new(&fine)
            .rhs(&u, &self.coefficients, DealiasRule::None)
            .expect("same grid");
        (0..n)
            .map(|i| {
                let j = i * ratio;
                self.spec.exact_t(t, fine.x(j), fine.length()) - rhs.samples()[j]
            })
            .collect()
    }
}

impl Forcing for ManufacturedForcing {
    fn eval(&self, t: f64, grid: &Grid, out: &mut [f64]) {
        let key = (t.to_bits(), grid.n());
        let mut cache = self.cache.lock().expect("forcing cache poisoned");
        if cache.key != Some(key) {
            cache.values = self.compute(t, grid);
            cache.key = Some(key);
        }
        out.copy_from_slice(&cache.values);
    }
}

/// Fixed-step forced run; returns the L-infinity error against `u*` at
/// `t_end`.
pub fn mms_error(
    spec: &ManufacturedSpec,
    g: &GeneralCoefficients,
    grid: &Grid,
    t_end: f64,
    dt: f64,
    rule: DealiasRule,
) -> Result<(f64, Field)> {
    let mut cfg = SimConfig::new(grid.clone(), *g, t_end, TimeStep::Fixed(dt));
    cfg.dealias = rule;
    cfg.snapshot_stride = usize::MAX;
    cfg.forcing = Some(Arc::new(ManufacturedForcing::new(*spec, *g)));
    let traj = integrate(&cfg, &spec.exact_field(grid, 0.0))?;
    let u = traj.final_state().clone();
    let err = u.max_abs_diff(&spec.exact_field(grid, traj.final_time))?;
    Ok((err, u))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalReport {
    pub n: usize,
    pub dts: [f64; 3],
    /// Errors against the manufactured solution.
    pub errors: [f64; 3],
    /// `|u(dt) - u(dt/2)|` and `|u(dt/2) - u(dt/4)|`.
    pub differences: [f64; 2],
    /// Richardson order `log2(d1 / d2)`.
    pub order: f64,
}

/// Temporal self-convergence with `dt`, `dt/2`, `dt/4`.
pub fn temporal_convergence(
    spec: &ManufacturedSpec,
    g: &GeneralCoefficients,
    grid: &Grid,
    t_end: f64,
    dt: f64,
    rule: DealiasRule,
) -> Result<TemporalReport> {
    let dts = [dt, dt / 2.0, dt / 4.0];
    let runs = dts
        .iter()
        .map(|&h| mms_error(spec, g, grid, t_end, h, rule))
        .collect::<Result<Vec<_>>>()?;
    let d1 = runs[0].1.max_abs_diff(&runs[1].1)?;
    let d2 = runs[1].1.max_abs_diff(&runs[2].1)?;
    let order = if d1 == 0.0 && d2 == 0.0 {
        f64::INFINITY
    } else {
        (d1 / d2).log2()
    };
    Ok(TemporalReport {
        n: grid.n(),
        dts,
        errors: [runs[0].0, runs[1].0, runs[2].0],
        differences: [d1, d2],
        order,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialReport {
    pub ns: [usize; 2],
    pub dt: f64,
    pub errors: [f64; 2],
    pub ratio: f64,
}

/// Errors at two resolutions with a common small time step.
pub fn spatial_convergence(
    spec: &ManufacturedSpec,
    g: &GeneralCoefficients,
    length: f64,
    ns: [usize; 2],
    t_end: f64,
    dt: f64,
    rule: DealiasRule,
) -> Result<SpatialReport> {
    let mut errors = [0.0; 2];
    for (e, &n) in errors.iter_mut().zip(&ns) {
        let grid = Grid::new(n, length)?;
        *e = mms_error(spec, g, &grid, t_end, dt, rule)?.0;
    }
    let ratio = if errors[1] > 0.0 {
        errors[0] / errors[1]
    } else if errors[0] > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    Ok(SpatialReport {
        ns,
        dt,
        errors,
        ratio,
    })
}
