//! Flat JSON run configurations.

use std::path::Path;

use serde::{Deserialize, Serialize};
use vortsw::coeffs::{model_coefficients, GeneralCoefficients};
use vortsw::output::Provenance;
use vortsw::solver::{mms::ManufacturedSpec, BreakingThresholds, SimConfig, TimeStep};
use vortsw::spectral::{random_band_limited, DealiasRule, Field, Grid, DEFAULT_LENGTH};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn default_length() -> f64 {
    DEFAULT_LENGTH
}
fn default_stride() -> usize {
    1
}
fn default_hs() -> f64 {
    2.0
}
fn default_mode() -> u32 {
    1
}
fn default_width() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Zero,
    /// `amplitude * sin(2 pi mode x / L)`
    Sine,
    /// `amplitude * cos(2 pi mode x / L)`
    Cosine,
    /// `amplitude * sech^2((x - center) / width)`
    Sech2,
    /// random band-limited field with modes up to `max_mode`, sup = amplitude
    Random,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateFile {
    pub schema_version: u32,
    pub n: usize,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(rename = "A", default)]
    pub vorticity: Option<f64>,
    #[serde(default)]
    pub coefficients: Option<GeneralCoefficients>,
    pub t_end: f64,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub cfl: Option<f64>,
    #[serde(default)]
    pub dealias: DealiasRule,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub breaking_stop: Option<f64>,
    #[serde(default = "default_hs")]
    pub hs_order: f64,
    pub initial: InitialKind,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "default_mode")]
    pub mode: u32,
    #[serde(default)]
    pub center: Option<f64>,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_mode")]
    pub max_mode: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub thresholds: Option<BreakingThresholds>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(
    path: &Path,
) -> Result<(T, serde_json::Value), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let parsed = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((parsed, value))
}

fn check_version(v: u32) -> Result<(), CliError> {
    if v != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "schema_version: expected {SCHEMA_VERSION}, got {v}"
        )));
    }
    Ok(())
}

/// Resolves the coefficient source: exactly one of `A` and `coefficients`.
pub fn resolve_coefficients(
    vorticity: Option<f64>,
    explicit: Option<GeneralCoefficients>,
) -> Result<(GeneralCoefficients, Provenance), CliError> {
    match (vorticity, explicit) {
        (Some(a), None) => {
            let g = model_coefficients(a)
                .and_then(|m| m.normalize())
                .map_err(|e| CliError::Config(format!("A: {e}")))?;
            Ok((g, Provenance::Vorticity { vorticity: a }))
        }
        (None, Some(g)) => Ok((g, Provenance::Explicit)),
        _ => Err(CliError::Config(
            "exactly one of `A` and `coefficients` must be given".into(),
        )),
    }
}

pub struct SimulateSetup {
    pub sim: SimConfig,
    pub initial: Field,
    pub provenance: Provenance,
    pub thresholds: BreakingThresholds,
}

impl SimulateFile {
    pub fn build(&self) -> Result<SimulateSetup, CliError> {
        check_version(self.schema_version)?;
        let grid = Grid::new(self.n, self.length)
            .map_err(|e| CliError::Config(format!("n/length: {e}")))?;
        let (coefficients, provenance) = resolve_coefficients(self.vorticity, self.coefficients)?;
        let time_step = match (self.dt, self.cfl) {
            (Some(dt), None) => TimeStep::Fixed(dt),
            (None, Some(c)) => TimeStep::Cfl(c),
            _ => {
                return Err(CliError::Config(
                    "exactly one of `dt` and `cfl` must be given".into(),
                ))
            }
        };
        let mut sim = SimConfig::new(grid.clone(), coefficients, self.t_end, time_step);
        sim.dealias = self.dealias;
        sim.snapshot_stride = self.snapshot_stride;
        sim.breaking_stop = self.breaking_stop;
        sim.hs_order = self.hs_order;
        sim.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;

        let l = self.length;
        let k = 2.0 * std::f64::consts::PI * self.mode as f64 / l;
        let a = self.amplitude;
        let initial = match self.initial {
            InitialKind::Zero => Field::zeros(&grid),
            InitialKind::Sine => Field::from_fn(&grid, |x| a * (k * x).sin()),
            InitialKind::Cosine => Field::from_fn(&grid, |x| a * (k * x).cos()),
            InitialKind::Sech2 => {
                let c = self.center.unwrap_or(l / 2.0);
                let w = self.width;
                if w.is_nan() || w <= 0.0 {
                    return Err(CliError::Config(format!(
                        "width: must be positive, got {w}"
                    )));
                }
                Field::from_fn(&grid, |x| a / ((x - c) / w).cosh().powi(2))
            }
            InitialKind::Random => random_band_limited(&grid, self.max_mode, a, self.seed),
        };
        Ok(SimulateSetup {
            sim,
            initial,
            provenance,
            thresholds: self.thresholds.unwrap_or_default(),
        })
    }
}

fn default_temporal_n() -> usize {
    64
}
fn default_temporal_dt() -> f64 {
    0.2
}
fn default_spatial_ns() -> [usize; 2] {
    [64, 128]
}
fn default_spatial_dt() -> f64 {
    0.01
}
fn default_t_end() -> f64 {
    1.0
}
fn default_mms_amplitude() -> f64 {
    0.1
}
fn default_concentration() -> f64 {
    30.0
}

pub const DEFAULT_MMS_VORTICITY: f64 = 1.5;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceFile {
    pub schema_version: u32,
    #[serde(rename = "A", default)]
    pub vorticity: Option<f64>,
    #[serde(default)]
    pub coefficients: Option<GeneralCoefficients>,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_mms_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_temporal_n")]
    pub temporal_n: usize,
    #[serde(default = "default_temporal_dt")]
    pub temporal_dt: f64,
    #[serde(default = "default_spatial_ns")]
    pub spatial_ns: [usize; 2],
    #[serde(default = "default_spatial_dt")]
    pub spatial_dt: f64,
    #[serde(default = "default_concentration")]
    pub concentration: f64,
    #[serde(default)]
    pub dealias: DealiasRule,
}

impl Default for ConvergenceFile {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            vorticity: Some(DEFAULT_MMS_VORTICITY),
            coefficients: None,
            length: default_length(),
            t_end: default_t_end(),
            amplitude: default_mms_amplitude(),
            temporal_n: default_temporal_n(),
            temporal_dt: default_temporal_dt(),
            spatial_ns: default_spatial_ns(),
            spatial_dt: default_spatial_dt(),
            concentration: default_concentration(),
            dealias: DealiasRule::default(),
        }
    }
}

pub struct ConvergenceSetup {
    pub coefficients: GeneralCoefficients,
    /// Band-limited profile for the temporal study.
    pub temporal: ManufacturedSpec,
    /// Smooth, not band-limited profile for the spatial study.
    pub spatial: ManufacturedSpec,
}

impl ConvergenceFile {
    pub fn build(&self) -> Result<ConvergenceSetup, CliError> {
        check_version(self.schema_version)?;
        // neither source given: same model as the built-in default study
        let vorticity = match (self.vorticity, &self.coefficients) {
            (None, None) => Some(DEFAULT_MMS_VORTICITY),
            (a, _) => a,
        };
        let (coefficients, _) = resolve_coefficients(vorticity, self.coefficients)?;
        for (name, v) in [
            ("t_end", self.t_end),
            ("temporal_dt", self.temporal_dt),
            ("spatial_dt", self.spatial_dt),
            ("length", self.length),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!(
                    "{name}: must be positive, got {v}"
                )));
            }
        }
        Ok(ConvergenceSetup {
            coefficients,
            temporal: ManufacturedSpec::cosine(self.amplitude),
            spatial: ManufacturedSpec::von_mises(self.amplitude, self.concentration),
        })
    }
}
