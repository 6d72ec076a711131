//! Post-hoc analysis of diagnostics series: the wave-breaking signature and
//! the H1 growth-rate fit.

use serde::{Deserialize, Serialize};

use super::integrate::DiagnosticsRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakingThresholds {
    /// Fraction of the recorded time span forming each comparison window.
    pub window: f64,
    /// Required ratio of the final window's growth rate to the previous one.
    pub superlinear_ratio: f64,
    /// Required factor by which `min u_x` must fall below its initial value.
    pub slope_factor: f64,
    /// Largest admissible relative change of `sup |u|`.
    pub sup_change: f64,
}

impl Default for BreakingThresholds {
    fn default() -> Self {
        Self {
            window: 0.1,
            superlinear_ratio: 1.25,
            slope_factor: 10.0,
            sup_change: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoBreakingEvidence,
    BreakingSignature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakingReport {
    pub verdict: Verdict,
    /// Growth rate of the breaking integral in the last window over the rate
    /// in the window before it.
    pub rate_ratio: f64,
    /// `min_t min u_x / min u_x(0)`; only meaningful when `min u_x(0) < 0`.
    pub slope_ratio: f64,
    /// `max_t |sup|u|(t) - sup|u|(0)| / sup|u|(0)`.
    pub sup_change: f64,
    pub superlinear: bool,
    pub steepened: bool,
    pub bounded: bool,
}

fn interpolate(records: &[DiagnosticsRecord], t: f64) -> f64 {
    let i = records.partition_point(|r| r.t < t);
    if i == 0 {
        return records[0].breaking_integral;
    }
    if i >= records.len() {
        return records[records.len() - 1].breaking_integral;
    }
    let (a, b) = (&records[i - 1], &records[i]);
    let w = (t - a.t) / (b.t - a.t);
    a.breaking_integral + w * (b.breaking_integral - a.breaking_integral)
}

/// Looks for the joint signature: superlinear growth of the breaking
/// integral, a slope that steepened by the configured factor, and a bounded
/// amplitude.
pub fn breaking_monitor(records: &[DiagnosticsRecord], th: &BreakingThresholds) -> BreakingReport {
    let none = BreakingReport {
        verdict: Verdict::NoBreakingEvidence,
        rate_ratio: 0.0,
        slope_ratio: 0.0,
        sup_change: 0.0,
        superlinear: false,
        steepened: false,
        bounded: true,
    };
    if records.len() < 3 {
        return none;
    }
    let first = &records[0];
    let last = &records[records.len() - 1];
    let span = last.t - first.t;
    if span <= 0.0 {
        return none;
    }

    let t2 = last.t;
    let t1 = t2 - th.window * span;
    let t0 = t1 - th.window * span;
    let (i0, i1, i2) = (
        interpolate(records, t0),
        interpolate(records, t1),
        interpolate(records, t2),
    );
    let early = i1 - i0;
    let late = i2 - i1;
    let rate_ratio = if early > 0.0 {
        late / early
    } else if late > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };

    let worst_slope = records
        .iter()
        .map(|r| r.min_ux)
        .fold(f64::INFINITY, f64::min);
    let slope_ratio = if first.min_ux < 0.0 {
        worst_slope / first.min_ux
    } else {
        0.0
    };

    let sup_change = if first.sup_u > 0.0 {
        records
            .iter()
            .map(|r| (r.sup_u - first.sup_u).abs() / first.sup_u)
            .fold(0.0, f64::max)
    } else {
        0.0
    };

    let superlinear = rate_ratio > th.superlinear_ratio;
    let steepened = first.min_ux < 0.0 && slope_ratio >= th.slope_factor;
    let bounded = records.iter().all(|r| r.sup_u.is_finite()) && sup_change < th.sup_change;
    let verdict = if superlinear && steepened && bounded {
        Verdict::BreakingSignature
    } else {
        Verdict::NoBreakingEvidence
    };
    BreakingReport {
        verdict,
        rate_ratio,
        slope_ratio,
        sup_change,
        superlinear,
        steepened,
        bounded,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H1GrowthReport {
    /// Smallest `C >= 0` with `ln(h1(t)/h1(0)) <= C I(t)` on every record.
    pub c_fit: f64,
    pub records_used: usize,
    pub finite: bool,
}

/// Log-ratios below this are treated as round-off.
pub const H1_FIT_FLOOR: f64 = 1e-12;

pub fn h1_growth_check(records: &[DiagnosticsRecord]) -> H1GrowthReport {
    let Some(first) = records.first() else {
        return H1GrowthReport {
            c_fit: 0.0,
            records_used: 0,
            finite: true,
        };
    };
    let mut c: f64 = 0.0;
    let mut used = 0;
    if first.h1 > 0.0 {
        for r in &records[1..] {
            if r.breaking_integral <= 0.0 {
                continue;
            }
            used += 1;
            let growth = (r.h1 / first.h1).ln();
            if growth > H1_FIT_FLOOR {
                c = c.max(growth / r.breaking_integral);
            }
        }
    }
    H1GrowthReport {
        c_fit: c,
        records_used: used,
        finite: c.is_finite(),
    }
}
