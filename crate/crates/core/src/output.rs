//! On-disk run artefacts: snapshot and diagnostics CSVs, the run manifest
//! and a gnuplot script.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coeffs::GeneralCoefficients;
use crate::error::Result;
use crate::solver::{BreakingReport, DiagnosticsRecord, H1GrowthReport, Termination, Trajectory};
use crate::spectral::Field;

pub const DIAGNOSTICS_HEADER: &str = "t,sup_u,min_ux,max_ux,h1,hs,breaking_integral,ch_energy";
pub const SNAPSHOT_HEADER: &str = "x,u";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PLOT_FILE: &str = "plot.gp";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// 17 significant digits; round-trips every `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_csv(u: &Field) -> String {
    let mut s = String::with_capacity(48 * u.grid().n());
    s.push_str(SNAPSHOT_HEADER);
    s.push('\n');
    for (x, v) in u.grid().points().zip(u.samples()) {
        let _ = writeln!(s, "{},{}", fmt_f64(x), fmt_f64(*v));
    }
    s
}

pub fn diagnostics_csv(records: &[DiagnosticsRecord]) -> String {
    let mut s = String::from(DIAGNOSTICS_HEADER);
    s.push('\n');
    for r in records {
        let row = [
            r.t,
            r.sup_u,
            r.min_ux,
            r.max_ux,
            r.h1,
            r.hs,
            r.breaking_integral,
            r.ch_energy,
        ]
        .map(fmt_f64)
        .join(",");
        s.push_str(&row);
        s.push('\n');
    }
    s
}

/// Where the coefficients came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    Vorticity {
        #[serde(rename = "A")]
        vorticity: f64,
    },
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub config: serde_json::Value,
    pub termination: Termination,
    pub wall_time_s: f64,
    pub grid: GridInfo,
    pub provenance: Provenance,
    pub coefficients: GeneralCoefficients,
    /// Linear dispersion relation of the rescaled form, with its sign fixed.
    pub dispersion_relation: String,
    pub steps: usize,
    pub final_time: f64,
    pub snapshots: Vec<String>,
    pub breaking: BreakingReport,
    pub h1_growth: H1GrowthReport,
}

pub const DISPERSION_RELATION: &str =
    "u = cos(kx - wt): w(k) = k (c + (beta0/beta) k^2) / (1 + k^2)";

pub fn snapshot_name(index: usize) -> String {
    format!("{SNAPSHOT_DIR}/snap_{index:05}.csv")
}

pub fn plot_script(final_snapshot: &str) -> String {
    format!(
        "# gnuplot script; run from the run directory with `gnuplot -p {PLOT_FILE}`\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set multiplot layout 3,1\n\
         set title 'u(t_final, x)'\n\
         set xlabel 'x'\n\
         plot '{final_snapshot}' using 1:2 with lines title 'u'\n\
         set title 'diagnostics'\n\
         set xlabel 't'\n\
         plot '{DIAGNOSTICS_FILE}' using 1:2 with lines title 'sup |u|', \\\n\
         \x20    '' using 1:3 with lines title 'min u_x', \\\n\
         \x20    '' using 1:4 with lines title 'max u_x', \\\n\
         \x20    '' using 1:5 with lines title 'H1'\n\
         set title 'breaking integral'\n\
         plot '{DIAGNOSTICS_FILE}' using 1:7 with lines title 'int max|u_x|^2 dt'\n\
         unset multiplot\n"
    )
}

/// Writes every artefact of a run into `dir`, returning the file list.
pub fn write_run(dir: &Path, traj: &Trajectory, manifest: &Manifest) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir.join(SNAPSHOT_DIR))?;
    let mut written = Vec::new();
    for (i, (_, field)) in traj.snapshots.iter().enumerate() {
        let path = dir.join(snapshot_name(i));
        fs::write(&path, snapshot_csv(field))?;
        written.push(path);
    }
    let diag = dir.join(DIAGNOSTICS_FILE);
    fs::write(&diag, diagnostics_csv(&traj.records))?;
    written.push(diag);

    let man = dir.join(MANIFEST_FILE);
    fs::write(&man, serde_json::to_string_pretty(manifest)?)?;
    written.push(man);

    let last = snapshot_name(traj.snapshots.len().saturating_sub(1));
    let plot = dir.join(PLOT_FILE);
    fs::write(&plot, plot_script(&last))?;
    written.push(plot);
    Ok(written)
}
