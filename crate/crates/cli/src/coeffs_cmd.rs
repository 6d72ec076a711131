use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::json;
use vortsw::coeffs::{
    derived_intermediates_at_height, identity_suite, model_coefficients, IdentityReport,
    ModelCoefficients,
};

use crate::CliError;

#[derive(clap::Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["vorticity", "sweep"])))]
pub struct Args {
    /// Vorticity A >= 0.
    #[arg(long = "A", allow_negative_numbers = true)]
    vorticity: Option<f64>,
    /// Log-spaced sweep `lo:hi:count`, printed as CSV.
    #[arg(long)]
    sweep: Option<String>,
    /// Height for the z-dependent intermediates (default z0).
    #[arg(long)]
    z: Option<f64>,
    /// JSON instead of the aligned table.
    #[arg(long)]
    json: bool,
}

pub fn run(args: &Args) -> Result<(), CliError> {
    if let Some(spec) = &args.sweep {
        return sweep(spec);
    }
    let a = args.vorticity.expect("clap enforces a source");
    let m = model_coefficients(a).map_err(|e| CliError::Config(e.to_string()))?;
    let g = m.normalize()?;
    let d =
        derived_intermediates_at_height(a, args.z).map_err(|e| CliError::Config(e.to_string()))?;
    let report = identity_suite(a)?;

    if args.json {
        let out = json!({
            "model": m,
            "general": g,
            "intermediates": d,
            "identities": report,
        });
        outln!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
    } else {
        out!("{}", table(&m));
        let mut s = String::new();
        let _ = writeln!(s, "\nnormalized coefficients");
        let gv = serde_json::to_value(g).expect("serializable");
        for (k, v) in gv.as_object().expect("struct") {
            let _ = writeln!(s, "  {k:<8} {:>24.16e}", v.as_f64().unwrap_or(f64::NAN));
        }
        let _ = writeln!(s, "\nintermediates (z = {:.16})", d.z);
        for i in 1..=20 {
            match d.b(i) {
                Some(v) => {
                    let _ = writeln!(s, "  B{i:<7} {v:>24.16e}");
                }
                None => {
                    let _ = writeln!(s, "  B{i:<7} {:>24}", "unavailable");
                }
            }
        }
        for i in 1..=10 {
            let _ = writeln!(s, "  A{i:<7} {:>24.16e}", d.a(i).expect("in range"));
        }
        for (k, v) in [("c8", d.c8), ("c9", d.c9), ("c10", d.c10)] {
            let _ = writeln!(s, "  {k:<8} {v:>24.16e}");
        }
        out!("{s}");
        out!("{}", identity_block(&report));
    }
    if report.all_pass() {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        Err(CliError::Check(format!(
            "identities failed: {}",
            names.join(", ")
        )))
    }
}

fn table(m: &ModelCoefficients) -> String {
    let mut s = String::from("model coefficients\n");
    let rows = [
        ("A", m.vorticity),
        ("c", m.c),
        ("alpha", m.alpha),
        ("beta", m.beta),
        ("beta0", m.beta0),
        ("omega1", m.omega1),
        ("omega2", m.omega2),
        ("omega3", m.omega3),
        ("omega4", m.omega4),
        ("omega5", m.omega5),
        ("omega6", m.omega6),
        ("omega7", m.omega7),
        ("z0", m.z0),
    ];
    for (name, v) in rows {
        let mark = if name.starts_with("omega") && v == 0.0 {
            "  <- exactly zero"
        } else {
            ""
        };
        let _ = writeln!(s, "  {name:<8} {v:>24.16e}{mark}");
    }
    s
}

fn identity_block(r: &IdentityReport) -> String {
    let mut s = format!(
        "\nidentities ({} checks, max residual {:.3e})\n",
        r.checks.len(),
        r.max_residual()
    );
    for c in &r.checks {
        let _ = writeln!(
            s,
            "  {:<34} {:>10.3e}  {}",
            c.name,
            c.residual,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}

fn parse_sweep(spec: &str) -> Result<(f64, f64, usize), CliError> {
    let bad = || CliError::Config(format!("--sweep expects lo:hi:count, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite() && n >= 1) {
        return Err(CliError::Config(format!(
            "--sweep needs 0 < lo <= hi and count >= 1, got `{spec}`"
        )));
    }
    Ok((lo, hi, n))
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn sweep(spec: &str) -> Result<(), CliError> {
    let (lo, hi, n) = parse_sweep(spec)?;
    let rows = log_spaced(lo, hi, n)
        .into_par_iter()
        .map(|a| Ok((model_coefficients(a)?, identity_suite(a)?)))
        .collect::<Result<Vec<_>, vortsw::Error>>()?;
    let mut out = String::from(
        "A,c,alpha,beta,beta0,omega1,omega2,omega3,omega4,omega5,omega6,omega7,z0,identities_pass,max_residual\n",
    );
    let mut failed = Vec::new();
    for (m, r) in &rows {
        let vals = [
            m.vorticity,
            m.c,
            m.alpha,
            m.beta,
            m.beta0,
            m.omega1,
            m.omega2,
            m.omega3,
            m.omega4,
            m.omega5,
            m.omega6,
            m.omega7,
            m.z0,
        ]
        .map(|v| format!("{v:.16e}"))
        .join(",");
        let _ = writeln!(out, "{vals},{},{:.3e}", r.all_pass(), r.max_residual());
        if !r.all_pass() {
            failed.push(m.vorticity);
        }
    }
    out!("{out}");
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "identities failed at A = {failed:?}"
        )))
    }
}
