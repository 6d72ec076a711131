use std::path::Path;

use serde_json::json;
use vortsw::solver::mms::{spatial_convergence, temporal_convergence};
use vortsw::spectral::Grid;

use crate::config::{read_json, ConvergenceFile};
use crate::CliError;

pub const MIN_TEMPORAL_ORDER: f64 = 3.8;
pub const MIN_SPATIAL_RATIO: f64 = 1e3;

pub fn run(config: Option<&Path>, zero: bool, as_json: bool) -> Result<(), CliError> {
    let mut file = match config {
        Some(p) => read_json::<ConvergenceFile>(p)?.0,
        None => ConvergenceFile::default(),
    };
    if zero {
        file.amplitude = 0.0;
    }
    let setup = file.build()?;
    let g = setup.coefficients;
    let grid =
        Grid::new(file.temporal_n, file.length).map_err(|e| CliError::Config(e.to_string()))?;
    for n in file.spatial_ns {
        Grid::new(n, file.length).map_err(|e| CliError::Config(e.to_string()))?;
    }

    let temporal = temporal_convergence(
        &setup.temporal,
        &g,
        &grid,
        file.t_end,
        file.temporal_dt,
        file.dealias,
    )?;
    let spatial = spatial_convergence(
        &setup.spatial,
        &g,
        file.length,
        file.spatial_ns,
        file.t_end,
        file.spatial_dt,
        file.dealias,
    )?;

    if as_json {
        let out = json!({ "temporal": temporal, "spatial": spatial, "zero": zero });
        outln!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
    } else {
        outln!("temporal (n = {}, T = {})", temporal.n, file.t_end);
        outln!("  {:>10}  {:>14}", "dt", "error");
        for (dt, e) in temporal.dts.iter().zip(&temporal.errors) {
            outln!("  {dt:>10.4}  {e:>14.6e}");
        }
        outln!("  observed order  {:.4}", temporal.order);
        outln!("spatial (dt = {}, T = {})", spatial.dt, file.t_end);
        outln!("  {:>10}  {:>14}", "n", "error");
        for (n, e) in spatial.ns.iter().zip(&spatial.errors) {
            outln!("  {n:>10}  {e:>14.6e}");
        }
        outln!("  error ratio     {:.4e}", spatial.ratio);
    }

    if zero {
        let all = temporal.errors.iter().chain(&spatial.errors);
        if all.clone().any(|&e| e != 0.0) {
            return Err(CliError::Check(
                "zero solution produced non-zero error".into(),
            ));
        }
        return Ok(());
    }
    let mut problems = Vec::new();
    if temporal.order.is_nan() || temporal.order < MIN_TEMPORAL_ORDER {
        problems.push(format!(
            "temporal order {:.3} < {MIN_TEMPORAL_ORDER}",
            temporal.order
        ));
    }
    if spatial.ratio.is_nan() || spatial.ratio <= MIN_SPATIAL_RATIO {
        problems.push(format!(
            "spatial ratio {:.3e} <= {MIN_SPATIAL_RATIO:e}",
            spatial.ratio
        ));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(problems.join("; ")))
    }
}
