use serde::Serialize;

use super::{derived_intermediates, model_coefficients, DerivedIntermediates, ModelCoefficients};
use crate::error::Result;

/// Relative tolerance for every algebraic identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    #[serde(rename = "A")]
    pub vorticity: f64,
    pub c: f64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

fn relative(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

struct Builder {
    checks: Vec<IdentityCheck>,
}

impl Builder {
    fn equal(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) {
        let residual = relative(lhs, rhs);
        self.push(name.into(), lhs, rhs, residual);
    }

    /// `value == 0` measured against a natural `scale`.
    fn vanishes(&mut self, name: impl Into<String>, value: f64, scale: f64) {
        let residual = value.abs() / scale.abs().max(f64::MIN_POSITIVE);
        self.push(name.into(), value, 0.0, residual);
    }

    fn holds(&mut self, name: impl Into<String>, value: f64, bound: f64, ok: bool) {
        self.push(name.into(), value, bound, if ok { 0.0 } else { 1.0 });
    }

    fn push(&mut self, name: String, lhs: f64, rhs: f64, residual: f64) {
        let pass = residual.is_finite() && residual < IDENTITY_TOLERANCE;
        self.checks.push(IdentityCheck {
            name,
            lhs,
            rhs,
            residual,
            tolerance: IDENTITY_TOLERANCE,
            pass,
        });
    }
}

/// Runs every identity for vorticity `a`.
pub fn identity_suite(a: f64) -> Result<IdentityReport> {
    let m = model_coefficients(a)?;
    let d = derived_intermediates(a)?;
    Ok(identity_suite_for(&m, &d))
}

/// Checks a (possibly perturbed) coefficient set against closed forms
/// recomputed from `m.c` and `m.vorticity`.
pub fn identity_suite_for(m: &ModelCoefficients, d: &DerivedIntermediates) -> IdentityReport {
    let c = m.c;
    let a = m.vorticity;
    let c2 = c * c;
    let q = c2 + 1.0;
    let e = c2 * c2 + c2 + 1.0;
    let mut b = Builder { checks: Vec::new() };

    b.vanishes("burns_condition", c2 - a * c - 1.0, c2.max(1.0));
    b.holds(
        "speed_at_least_one",
        c,
        1.0,
        c >= 1.0 && ((c == 1.0) == (a == 0.0)),
    );
    b.holds("alpha_positive", m.alpha, 0.0, m.alpha > 0.0);
    b.holds("beta_positive", m.beta, 0.0, m.beta > 0.0);

    b.equal("three_alpha_closed_form", 3.0 * m.alpha, e / q);
    b.equal(
        "three_alpha_shear_form",
        3.0 * m.alpha,
        (3.0 * c2 - 3.0 * a * c + a * a) / ((2.0 * c - a) * (c - a)),
    );
    b.equal(
        "beta_factored_form",
        m.beta,
        (c2 * c2 + 6.0 * c2 + 3.0) / (2.0 * q * q * e),
    );
    b.equal(
        "beta0_closed_form",
        m.beta0,
        c * m.beta - 1.0 / (3.0 * c * q),
    );
    b.equal(
        "beta0_shear_form",
        m.beta0,
        c * m.beta - (c - a) * (c - a) / (3.0 * (2.0 * c - a)),
    );

    let omegas = m.omegas();
    for i in 1..=4 {
        let bi = d.b(10 + i).unwrap_or(f64::NAN);
        b.equal(format!("omega{i}_equals_B{}", 10 + i), omegas[i - 1], bi);
    }
    if a == 0.0 {
        for (i, w) in omegas.iter().take(4).enumerate() {
            b.vanishes(format!("omega{}_vanishes_irrotational", i + 1), *w, 1.0);
        }
    }

    for (i, ci) in [(8, d.c8), (9, d.c9), (10, d.c10)] {
        b.equal(
            format!("A{i}_equals_minus_c{i}"),
            d.a(i).unwrap_or(f64::NAN),
            -ci,
        );
    }

    let b16 = d.b(16).unwrap_or(f64::NAN);
    let b17 = d.b(17).unwrap_or(f64::NAN);
    let ch_target = -(c2 * c2 + 6.0 * c2 + 3.0) / (3.0 * q * q * q);
    b.equal("B16_equals_two_B17", b16, 2.0 * b17);
    b.equal("B16_ch_constraint", b16, ch_target);
    b.equal("B17_equals_minus_alpha_beta", b17, -m.alpha * m.beta);
    b.equal(
        "time_dispersion_matches_beta",
        (c - a) * d.gamma6_times_1_minus_nu,
        -m.beta,
    );

    b.equal(
        "remark_identity",
        2.0 * d.c8 + 2.0 * d.c9 - d.c10,
        (c2 * c2 * c2 + 7.0 * c2 * c2 + 7.0 * c2 + 3.0) / (3.0 * c2 * q * q * q),
    );

    b.holds(
        "z0_in_unit_interval",
        m.z0,
        1.0,
        (0.0..=1.0).contains(&m.z0),
    );
    let b15 = d.b(15).unwrap_or(f64::NAN);
    b.holds("B15_finite", b15, 0.0, b15.is_finite());

    IdentityReport {
        vorticity: a,
        c,
        checks: b.checks,
    }
}
