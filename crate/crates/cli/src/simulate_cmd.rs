use std::path::{Path, PathBuf};
use std::time::Instant;

use vortsw::output::{snapshot_name, write_run, GridInfo, Manifest, DISPERSION_RELATION};
use vortsw::solver::{breaking_monitor, h1_growth_check, integrate, Termination};

use crate::config::{read_json, SimulateFile, SCHEMA_VERSION};
use crate::{CliError, OUTPUT_ROOT_VAR};

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"))
}

pub fn run(config: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let (file, echo): (SimulateFile, _) = read_json(config)?;
    let setup = file.build()?;

    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => {
            let name = file.output_dir.clone().unwrap_or_else(|| {
                config
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "run".into())
            });
            output_root().join(name)
        }
    };

    let started = Instant::now();
    let traj = integrate(&setup.sim, &setup.initial)?;
    let wall = started.elapsed().as_secs_f64();
    let breaking = breaking_monitor(&traj.records, &setup.thresholds);
    let h1 = h1_growth_check(&traj.records);

    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        config: echo,
        termination: traj.termination,
        wall_time_s: wall,
        grid: GridInfo {
            n: setup.sim.grid.n(),
            length: setup.sim.grid.length(),
        },
        provenance: setup.provenance,
        coefficients: setup.sim.coefficients,
        dispersion_relation: DISPERSION_RELATION.into(),
        steps: traj.steps,
        final_time: traj.final_time,
        snapshots: (0..traj.snapshots.len()).map(snapshot_name).collect(),
        breaking: breaking.clone(),
        h1_growth: h1,
    };
    write_run(&dir, &traj, &manifest)?;

    let last = traj.records.last().expect("initial record");
    outln!("run directory   {}", dir.display());
    outln!("termination     {:?}", traj.termination);
    outln!("steps           {}", traj.steps);
    outln!("final time      {:.6}", traj.final_time);
    outln!("sup |u|         {:.6e}", last.sup_u);
    outln!("min u_x         {:.6e}", last.min_ux);
    outln!("ch energy       {:.6e}", last.ch_energy);
    outln!("breaking        {:?}", breaking.verdict);

    if traj.termination == Termination::Nonfinite {
        return Err(CliError::Check(format!(
            "solution became non-finite at t = {}",
            traj.final_time
        )));
    }
    Ok(())
}
