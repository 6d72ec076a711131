//! Littlewood-Paley blocks and discrete Besov norms on periodic fields.
//!
//! `chi` equals one on `|k| <= 3/4`, vanishes for `|k| >= 4/3`, and joins
//! the two with the standard `exp(-1/t)` smooth step; `phi(k) = chi(k/2) -
//! chi(k)`. The sum `chi + sum_{q <= Q} phi(2^-q k)` telescopes to
//! `chi(2^-(Q+1) k)`, which is one on the whole resolved band once
//! `2^Q >= k_max`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::Field;

const INNER: f64 = 0.75;
const OUTER: f64 = 4.0 / 3.0;

fn smooth_step(t: f64) -> f64 {
    // 0 for t <= 0, 1 for t >= 1, C-infinity in between
    let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let a = f(t);
    let b = f(1.0 - t);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Low-frequency cutoff.
pub fn chi(k: f64) -> f64 {
    let a = k.abs();
    if a <= INNER {
        1.0
    } else if a >= OUTER {
        0.0
    } else {
        smooth_step((OUTER - a) / (OUTER - INNER))
    }
}

/// Annulus cutoff supported on `3/4 <= |k| <= 8/3`.
pub fn phi(k: f64) -> f64 {
    chi(k / 2.0) - chi(k)
}

/// Multiplier of block `q` (with `q = -1` the low-frequency block).
pub fn block_multiplier(q: i32, k: f64) -> f64 {
    if q < 0 {
        chi(k)
    } else {
        phi(k / 2f64.powi(q))
    }
}

/// Highest block index needed to cover `|k| <= k_max`.
pub fn q_max(k_max: f64) -> i32 {
    (k_max.log2().ceil() as i32).max(0)
}

#[derive(Debug, Clone)]
pub struct DyadicBlocks {
    /// `-1, 0, .., q_max`.
    pub indices: Vec<i32>,
    pub blocks: Vec<Field>,
}

impl DyadicBlocks {
    pub fn reconstruct(&self) -> Field {
        let grid = self.blocks[0].grid();
        let mut sum = vec![0.0; grid.n()];
        for b in &self.blocks {
            for (s, v) in sum.iter_mut().zip(b.samples()) {
                *s += v;
            }
        }
        Field::from_samples(grid, sum).expect("sum of finite blocks")
    }

    pub fn block(&self, q: i32) -> Option<&Field> {
        self.indices
            .iter()
            .position(|&i| i == q)
            .map(|i| &self.blocks[i])
    }
}

pub fn decompose(u: &Field) -> DyadicBlocks {
    let qm = q_max(u.grid().k_max());
    let indices: Vec<i32> = (-1..=qm).collect();
    let blocks = indices
        .iter()
        .map(|&q| u.apply_multiplier(|k, _| Complex64::new(block_multiplier(q, k), 0.0)))
        .collect();
    DyadicBlocks { indices, blocks }
}

/// Discrete `L^p` norm with `dx` weights; `p = inf` is the grid max.
pub fn lp_norm(u: &Field, p: f64) -> f64 {
    if p.is_infinite() {
        u.linf()
    } else {
        let dx = u.grid().dx();
        (u.samples().iter().map(|v| v.abs().powf(p)).sum::<f64>() * dx).powf(1.0 / p)
    }
}

fn check_exponent(name: &'static str, v: f64) -> Result<()> {
    if v.is_nan() || v < 1.0 {
        return Err(invalid(name, format!("must be >= 1, got {v}")));
    }
    Ok(())
}

/// `L^p` norms of each block, paired with the block index.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNorms {
    pub p: f64,
    pub norms: Vec<(i32, f64)>,
}

impl BlockNorms {
    pub fn new(blocks: &DyadicBlocks, p: f64) -> Result<Self> {
        check_exponent("p", p)?;
        Ok(Self {
            p,
            norms: blocks
                .indices
                .iter()
                .zip(&blocks.blocks)
                .map(|(&q, b)| (q, lp_norm(b, p)))
                .collect(),
        })
    }

    /// `|| (2^{q s} ||Delta_q u||_p)_q ||_{l^r}`, over all blocks or only
    /// `q >= 0`.
    pub fn combine(&self, s: f64, r: f64, include_low: bool) -> Result<f64> {
        check_exponent("r", r)?;
        let terms = self
            .norms
            .iter()
            .filter(|(q, _)| include_low || *q >= 0)
            .map(|&(q, n)| 2f64.powf(q as f64 * s) * n);
        Ok(if r.is_infinite() {
            terms.fold(0.0, f64::max)
        } else {
            terms.map(|v| v.powf(r)).sum::<f64>().powf(1.0 / r)
        })
    }
}

/// Besov norm `B^s_{p,r}`; pass `f64::INFINITY` for `p` or `r = inf`.
pub fn besov_norm(u: &Field, s: f64, p: f64, r: f64) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("r", r)?;
    BlockNorms::new(&decompose(u), p)?.combine(s, r, true)
}

fn fmt_exp(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub check: String,
    pub params: String,
    pub defect_or_ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub checks: Vec<InequalityCheck>,
    /// Largest log-interpolation ratio over the sample; the constant of the
    /// inequality is not known, so this is reported rather than asserted.
    pub log_ratio_max: f64,
}

impl InequalityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub p: f64,
    pub theta: f64,
    pub s1: f64,
    pub s2: f64,
    /// Relative slack allowed for the exact inequalities.
    pub tolerance: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            theta: 0.5,
            s1: 0.5,
            s2: 1.5,
            tolerance: 1e-12,
        }
    }
}

const R_LADDER: [f64; 4] = [1.0, 2.0, 4.0, f64::INFINITY];

/// Checks the exact `l^r` nesting and Hoelder interpolation inequalities on
/// every field, and records the log-interpolation ratio.
pub fn inequality_suite(fields: &[Field], sp: &SuiteParams) -> Result<InequalityReport> {
    check_exponent("p", sp.p)?;
    let mut checks = Vec::new();
    let mut log_ratio_max: f64 = 0.0;
    let p = sp.p;
    for (i, u) in fields.iter().enumerate() {
        let norms = BlockNorms::new(&decompose(u), p)?;

        // (a) r-monotonicity at s = s1
        for (a, &r1) in R_LADDER.iter().enumerate() {
            for &r2 in &R_LADDER[a + 1..] {
                let n1 = norms.combine(sp.s1, r1, true)?;
                let n2 = norms.combine(sp.s1, r2, true)?;
                let defect = (n2 - n1).max(0.0);
                checks.push(InequalityCheck {
                    check: "r_monotonicity".into(),
                    params: format!(
                        "field={i} s={} p={} r1={} r2={}",
                        sp.s1,
                        fmt_exp(p),
                        fmt_exp(r1),
                        fmt_exp(r2)
                    ),
                    defect_or_ratio: defect,
                    pass: defect <= sp.tolerance * n1,
                });
            }
        }

        // (b) interpolation between s1 and s2
        let s_mid = sp.theta * sp.s1 + (1.0 - sp.theta) * sp.s2;
        for &r in &R_LADDER {
            let lhs = norms.combine(s_mid, r, true)?;
            let rhs = norms.combine(sp.s1, r, true)?.powf(sp.theta)
                * norms.combine(sp.s2, r, true)?.powf(1.0 - sp.theta);
            let defect = (lhs - rhs).max(0.0);
            checks.push(InequalityCheck {
                check: "interpolation".into(),
                params: format!(
                    "field={i} theta={} s1={} s2={} p={} r={}",
                    sp.theta,
                    sp.s1,
                    sp.s2,
                    fmt_exp(p),
                    fmt_exp(r)
                ),
                defect_or_ratio: defect,
                pass: defect <= sp.tolerance * rhs,
            });
        }

        // (c) log-interpolation ratio
        let s0 = 1.0 / p;
        let b1 = norms.combine(s0, 1.0, true)?;
        let binf = norms.combine(s0, f64::INFINITY, true)?;
        let bhigh = norms.combine(1.0 + s0, f64::INFINITY, true)?;
        let ratio = if binf > 0.0 {
            b1 / (binf * (std::f64::consts::E + bhigh / binf).ln())
        } else {
            0.0
        };
        log_ratio_max = log_ratio_max.max(ratio);
        checks.push(InequalityCheck {
            check: "log_interpolation_ratio".into(),
            params: format!("field={i} p={}", fmt_exp(p)),
            defect_or_ratio: ratio,
            pass: ratio.is_finite(),
        });
    }
    Ok(InequalityReport {
        checks,
        log_ratio_max,
    })
}
