//! The three presentations of the model: the dimensional-parameter local
//! form, its rescaled version, and the nonlocal evolution form.
//!
//! Local form with scale parameters (`e` = epsilon, `m` = mu):
//!
//! ```text
//! u_t - b m u_xxt + c u_x + 3a e u u_x - b0 m u_xxx + sum_i w_i e^(i+1) u^(i+1) u_x
//!     = a b e m (2 u_x u_xx + u u_xxx) + e^2 m (w5 u^2 u_xxx + w6 u_x^3 + w7 u u_x u_xx)
//! ```
//!
//! Substituting `v(t, x) = a e u(s t, s x)` with `s = sqrt(b m)` turns it into
//! the rescaled form with unit time dispersion; every term of the rescaled
//! residual is exactly `a e s` times the corresponding term of the original
//! residual evaluated at `(s t, s x)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::{GeneralCoefficients, ModelCoefficients};
use crate::error::{invalid, Error, Result};
use crate::spectral::{DealiasRule, Field, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleParams {
    pub epsilon: f64,
    pub mu: f64,
}

impl ScaleParams {
    pub fn new(epsilon: f64, mu: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid(
                "epsilon",
                format!("must be positive and finite, got {epsilon}"),
            ));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(invalid(
                "mu",
                format!("must be positive and finite, got {mu}"),
            ));
        }
        Ok(Self { epsilon, mu })
    }

    /// The spatial/temporal stretch `sqrt(beta mu)`.
    pub fn stretch(&self, m: &ModelCoefficients) -> f64 {
        (m.beta * self.mu).sqrt()
    }

    /// The common factor relating the two local residuals.
    pub fn rescale_factor(&self, m: &ModelCoefficients) -> f64 {
        m.alpha * self.epsilon * self.stretch(m)
    }
}

/// Pointwise values of `u` and the derivatives the local forms need.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub u: f64,
    pub ut: f64,
    pub ux: f64,
    pub uxx: f64,
    pub uxxx: f64,
    pub uxxt: f64,
}

/// Coefficients of a local form
/// `u_t - td u_xxt + speed u_x + quad u u_x - disp u_xxx + sum_i higher[i] u^(i+2) u_x
///  = ch (2 u_x u_xx + u u_xxx) + q_uuxxx u^2 u_xxx + q_ux3 u_x^3 + q_uuxuxx u u_x u_xx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalForm {
    pub time_dispersion: f64,
    pub speed: f64,
    pub quadratic: f64,
    pub dispersion: f64,
    pub higher: [f64; 4],
    pub ch: f64,
    pub q_uuxxx: f64,
    pub q_ux3: f64,
    pub q_uuxuxx: f64,
}

impl LocalForm {
    /// The equation with explicit `epsilon`, `mu`.
    pub fn original(m: &ModelCoefficients, s: &ScaleParams) -> Self {
        let (e, mu) = (s.epsilon, s.mu);
        Self {
            time_dispersion: m.beta * mu,
            speed: m.c,
            quadratic: 3.0 * m.alpha * e,
            dispersion: m.beta0 * mu,
            higher: [
                m.omega1 * e.powi(2),
                m.omega2 * e.powi(3),
                m.omega3 * e.powi(4),
                m.omega4 * e.powi(5),
            ],
            ch: m.alpha * m.beta * e * mu,
            q_uuxxx: m.omega5 * e * e * mu,
            q_ux3: m.omega6 * e * e * mu,
            q_uuxuxx: m.omega7 * e * e * mu,
        }
    }

    /// The rescaled form with unit time dispersion.
    pub fn rescaled(m: &ModelCoefficients) -> Self {
        let a2b = m.alpha * m.alpha * m.beta;
        Self {
            time_dispersion: 1.0,
            speed: m.c,
            quadratic: 3.0,
            dispersion: m.beta0 / m.beta,
            higher: [
                m.omega1 / m.alpha.powi(2),
                m.omega2 / m.alpha.powi(3),
                m.omega3 / m.alpha.powi(4),
                m.omega4 / m.alpha.powi(5),
            ],
            ch: 1.0,
            q_uuxxx: m.omega5 / a2b,
            q_ux3: m.omega6 / a2b,
            q_uuxuxx: m.omega7 / a2b,
        }
    }

    /// Drops every nonlinear term.
    pub fn linear_part(self) -> Self {
        Self {
            quadratic: 0.0,
            higher: [0.0; 4],
            ch: 0.0,
            q_uuxxx: 0.0,
            q_ux3: 0.0,
            q_uuxuxx: 0.0,
            ..self
        }
    }

    fn terms(&self, j: &Jet) -> [f64; 13] {
        let Jet {
            u,
            ut,
            ux,
            uxx,
            uxxx,
            uxxt,
        } = *j;
        let u2 = u * u;
        [
            ut,
            -self.time_dispersion * uxxt,
            self.speed * ux,
            self.quadratic * u * ux,
            -self.dispersion * uxxx,
            self.higher[0] * u2 * ux,
            self.higher[1] * u2 * u * ux,
            self.higher[2] * u2 * u2 * ux,
            self.higher[3] * u2 * u2 * u * ux,
            -self.ch * (2.0 * ux * uxx + u * uxxx),
            -self.q_uuxxx * u2 * uxxx,
            -self.q_ux3 * ux * ux * ux,
            -self.q_uuxuxx * u * ux * uxx,
        ]
    }

    /// Left side minus right side.
    pub fn residual(&self, j: &Jet) -> f64 {
        self.terms(j).iter().sum()
    }

    /// Sum of absolute term sizes; the natural scale for the residual.
    pub fn magnitude(&self, j: &Jet) -> f64 {
        self.terms(j).iter().map(|t| t.abs()).sum()
    }

    /// Linear frequency `w(k)` for `u = cos(k x - w t)`.
    pub fn linear_frequency(&self, k: f64) -> f64 {
        k * (self.speed + self.dispersion * k * k) / (1.0 + self.time_dispersion * k * k)
    }
}

fn jets(u: &Field, u_t: &Field) -> Result<Vec<Jet>> {
    u.grid().ensure_same(u_t.grid())?;
    let ux = u.derivative();
    let uxx = u.derivative_n(2);
    let uxxx = u.derivative_n(3);
    let uxxt = u_t.derivative_n(2);
    Ok((0..u.grid().n())
        .map(|i| Jet {
            u: u.samples()[i],
            ut: u_t.samples()[i],
            ux: ux.samples()[i],
            uxx: uxx.samples()[i],
            uxxx: uxxx.samples()[i],
            uxxt: uxxt.samples()[i],
        })
        .collect())
}

/// Residual of a local form for the pair `(u, u_t)`, derivatives spectral.
pub fn residual_of(form: &LocalForm, u: &Field, u_t: &Field) -> Result<Field> {
    let r = jets(u, u_t)?.iter().map(|j| form.residual(j)).collect();
    Field::from_samples(u.grid(), r)
}

/// Residual of the original local form.
pub fn residual_local_form(
    u: &Field,
    u_t: &Field,
    m: &ModelCoefficients,
    s: &ScaleParams,
) -> Result<Field> {
    residual_of(&LocalForm::original(m, s), u, u_t)
}

/// Reusable buffers for the nonlocal right-hand side.
pub struct RhsWorkspace {
    grid: Grid,
    spec: Vec<Complex64>,
    aux: Vec<Complex64>,
    scratch: Vec<Complex64>,
    ux: Vec<f64>,
}

impl RhsWorkspace {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n();
        Self {
            grid: grid.clone(),
            spec: vec![Complex64::default(); n],
            aux: vec![Complex64::default(); n],
            scratch: vec![Complex64::default(); grid.scratch_len()],
            ux: vec![0.0; n],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rhs(&mut self, u: &Field, g: &GeneralCoefficients, rule: DealiasRule) -> Result<Field> {
        self.grid.ensure_same(u.grid())?;
        let mut out = vec![0.0; self.grid.n()];
        self.rhs_into(u.samples(), g, rule, &mut out)?;
        Ok(Field::from_samples_unchecked(&self.grid, out))
    }

    /// `du/dt` of the nonlocal form for raw samples. With a dealias rule the
    /// whole right-hand side is truncated before the final transform.
    pub fn rhs_into(
        &mut self,
        u: &[f64],
        g: &GeneralCoefficients,
        rule: DealiasRule,
        out: &mut [f64],
    ) -> Result<()> {
        let n = self.grid.n();
        if u.len() != n || out.len() != n {
            return Err(Error::GridMismatch {
                expected_n: n,
                expected_len: self.grid.length(),
                got_n: u.len().min(out.len()),
                got_len: self.grid.length(),
            });
        }
        let grid = self.grid.clone();
        let k = grid.wavenumbers();
        let nyq = grid.nyquist_index();

        // u_x
        for (s, &v) in self.spec.iter_mut().zip(u) {
            *s = Complex64::new(v, 0.0);
        }
        grid.fft_in_place(&mut self.spec, &mut self.scratch);
        for (j, s) in self.spec.iter_mut().enumerate() {
            *s = if j == nyq {
                Complex64::default()
            } else {
                *s * Complex64::new(0.0, k[j])
            };
        }
        grid.ifft_in_place(&mut self.spec, &mut self.scratch);
        for (d, s) in self.ux.iter_mut().zip(&self.spec) {
            *d = s.re;
        }

        // Pack the conservative flux (real part) and the cubic slope term
        // (imaginary part) into one transform.
        let b = g.polynomial_flux();
        for ((a, &v), &vx) in self.aux.iter_mut().zip(u).zip(&self.ux) {
            let poly = v * (b[0] + v * (b[1] + v * (b[2] + v * (b[3] + v * (b[4] + v * b[5])))));
            let vx2 = vx * vx;
            let flux = poly + g.beta7 * vx2 + g.beta8 * v * vx2;
            *a = Complex64::new(flux, g.gamma * vx2 * vx);
        }
        grid.fft_in_place(&mut self.aux, &mut self.scratch);
        for (j, (s, &kj)) in self.spec.iter_mut().zip(k).enumerate() {
            let z = self.aux[j];
            let zc = self.aux[(n - j) % n].conj();
            let f_hat = (z + zc) * 0.5;
            let g_hat = (z - zc) * Complex64::new(0.0, -0.5);
            let dx = if j == nyq {
                Complex64::default()
            } else {
                Complex64::new(0.0, kj)
            };
            *s = (dx * f_hat + g_hat) / (1.0 + kj * kj);
        }

        let advect = |v: f64, vx: f64| -(g.alpha1 + v * (g.alpha2 + v * g.alpha3)) * vx;
        if rule == DealiasRule::None {
            grid.ifft_in_place(&mut self.spec, &mut self.scratch);
            for (i, o) in out.iter_mut().enumerate() {
                *o = self.spec[i].re + advect(u[i], self.ux[i]);
            }
        } else {
            for ((a, &v), &vx) in self.aux.iter_mut().zip(u).zip(&self.ux) {
                *a = Complex64::new(advect(v, vx), 0.0);
            }
            grid.fft_in_place(&mut self.aux, &mut self.scratch);
            for (s, a) in self.spec.iter_mut().zip(&self.aux) {
                *s += a;
            }
            rule.apply(&grid, &mut self.spec);
            grid.ifft_in_place(&mut self.spec, &mut self.scratch);
            for (o, s) in out.iter_mut().zip(&self.spec) {
                *o = s.re;
            }
        }
        Ok(())
    }
}

/// `du/dt` of the nonlocal form, no truncation.
pub fn rhs_nonlocal(u: &Field, g: &GeneralCoefficients) -> Field {
    RhsWorkspace::new(u.grid())
        .rhs(u, g, DealiasRule::None)
        .expect("workspace built on the field's grid")
}

/// `u_t` extracted from the rescaled local form by applying the Helmholtz
/// inverse to every other term.
pub fn rescaled_form_time_derivative(u: &Field, m: &ModelCoefficients) -> Field {
    let form = LocalForm::rescaled(m);
    let ux = u.derivative();
    let uxx = u.derivative_n(2);
    let uxxx = u.derivative_n(3);
    // Linear terms stay spectral: -(c u_x - d u_xxx) has multiplier
    // -(i k c + i k^3 d).
    let linear = u.apply_multiplier(|k, nyq| {
        if nyq {
            Complex64::default()
        } else {
            Complex64::new(0.0, -(form.speed * k + form.dispersion * k * k * k))
        }
    });
    let nonlinear: Vec<f64> = (0..u.grid().n())
        .map(|i| {
            let j = Jet {
                u: u.samples()[i],
                ux: ux.samples()[i],
                uxx: uxx.samples()[i],
                uxxx: uxxx.samples()[i],
                ..Jet::default()
            };
            // residual with the linear part stripped is the nonlinear balance
            let nl = LocalForm {
                time_dispersion: 0.0,
                speed: 0.0,
                dispersion: 0.0,
                ..form
            };
            -nl.residual(&j)
        })
        .collect();
    let nonlinear = Field::from_samples_unchecked(u.grid(), nonlinear);
    let total = linear
        .zip_with(&nonlinear, |a, b| a + b)
        .expect("same grid");
    total.helmholtz_inverse()
}

/// Serializable pass/fail record of a residual check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const FORM_EQUIVALENCE_TOLERANCE: f64 = 1e-8;

/// L-infinity gap between `u_t` from the rescaled local form and from the
/// nonlocal form with normalised coefficients.
pub fn verify_form_equivalence(u: &Field, m: &ModelCoefficients) -> Result<CheckReport> {
    let g = m.normalize()?;
    let a = rescaled_form_time_derivative(u, m);
    let b = rhs_nonlocal(u, &g);
    let residual = a.max_abs_diff(&b)?;
    Ok(CheckReport {
        check: "form_equivalence".into(),
        n: u.grid().n(),
        length: u.grid().length(),
        residual,
        tolerance: FORM_EQUIVALENCE_TOLERANCE,
        pass: residual < FORM_EQUIVALENCE_TOLERANCE,
    })
}

/// Space-time test functions with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `amp exp(-decay t) exp(-((x - x0 - speed t)/width)^2)`
    GaussianBump {
        amp: f64,
        x0: f64,
        width: f64,
        speed: f64,
        decay: f64,
    },
    /// `amp cos(k x - omega t)`
    PlaneWave { amp: f64, k: f64, omega: f64 },
}

impl TestFunction {
    pub fn jet(&self, t: f64, x: f64) -> Jet {
        match *self {
            TestFunction::GaussianBump {
                amp,
                x0,
                width,
                speed,
                decay,
            } => {
                let e = amp * (-decay * t).exp();
                let xi = (x - x0 - speed * t) / width;
                let g = (-xi * xi).exp();
                let g1 = -2.0 * xi * g;
                let g2 = (4.0 * xi * xi - 2.0) * g;
                let g3 = (-8.0 * xi * xi * xi + 12.0 * xi) * g;
                let w = width;
                Jet {
                    u: e * g,
                    ut: -decay * e * g - speed / w * e * g1,
                    ux: e * g1 / w,
                    uxx: e * g2 / (w * w),
                    uxxx: e * g3 / (w * w * w),
                    uxxt: -decay * e * g2 / (w * w) - speed * e * g3 / (w * w * w),
                }
            }
            TestFunction::PlaneWave { amp, k, omega } => {
                let th = k * x - omega * t;
                let (s, c) = th.sin_cos();
                Jet {
                    u: amp * c,
                    ut: amp * omega * s,
                    ux: -amp * k * s,
                    uxx: -amp * k * k * c,
                    uxxx: amp * k * k * k * s,
                    uxxt: -amp * omega * k * k * s,
                }
            }
        }
    }

    /// The family member equal to `scale * u(s t, s x)`.
    pub fn rescaled(&self, scale: f64, s: f64) -> Self {
        match *self {
            TestFunction::GaussianBump {
                amp,
                x0,
                width,
                speed,
                decay,
            } => TestFunction::GaussianBump {
                amp: scale * amp,
                x0: x0 / s,
                width: width / s,
                speed,
                decay: decay * s,
            },
            TestFunction::PlaneWave { amp, k, omega } => TestFunction::PlaneWave {
                amp: scale * amp,
                k: k * s,
                omega: omega * s,
            },
        }
    }

    /// Sample points `(t, x)` in the original variables covering the
    /// function's interesting region.
    fn sample_points(&self) -> Vec<(f64, f64)> {
        let (centre, half) = match *self {
            TestFunction::GaussianBump { x0, width, .. } => (x0, 3.0 * width),
            TestFunction::PlaneWave { k, .. } => (0.0, std::f64::consts::PI / k.abs()),
        };
        let mut pts = Vec::new();
        for it in 0..4 {
            let t = 0.2 * it as f64;
            for ix in 0..41 {
                let x = centre - half + 2.0 * half * ix as f64 / 40.0;
                pts.push((t, x));
            }
        }
        pts
    }
}

pub const RESCALE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaleReport {
    pub check: String,
    /// Least-squares common factor; `None` when both residuals vanish.
    pub fitted_k: Option<f64>,
    pub expected_k: f64,
    /// `max |R2 - K R1| / max |R2|`, or the larger normalised residual when
    /// both vanish.
    pub defect: f64,
    pub max_residual_original: f64,
    pub max_residual_rescaled: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks the residual of the rescaled form at `a e u(s t, s x)` against the
/// original residual at `(s t, s x)`.
pub fn verify_rescale(
    test: &TestFunction,
    s: &ScaleParams,
    m: &ModelCoefficients,
    linear_only: bool,
) -> RescaleReport {
    let mut f1 = LocalForm::original(m, s);
    let mut f2 = LocalForm::rescaled(m);
    if linear_only {
        f1 = f1.linear_part();
        f2 = f2.linear_part();
    }
    let st = s.stretch(m);
    let expected_k = s.rescale_factor(m);
    let v = test.rescaled(m.alpha * s.epsilon, st);

    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    let (mut scale1, mut scale2) = (0.0_f64, 0.0_f64);
    for (t, x) in test.sample_points() {
        let j1 = test.jet(t, x);
        let j2 = v.jet(t / st, x / st);
        r1.push(f1.residual(&j1));
        r2.push(f2.residual(&j2));
        scale1 = scale1.max(f1.magnitude(&j1));
        scale2 = scale2.max(f2.magnitude(&j2));
    }
    let max1 = r1.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let max2 = r2.iter().fold(0.0_f64, |a, v| a.max(v.abs()));

    let vanish = 1e-12;
    let (fitted_k, defect) = if max1 <= vanish * scale1 && max2 <= vanish * scale2 {
        (
            None,
            (max1 / scale1.max(f64::MIN_POSITIVE)).max(max2 / scale2.max(f64::MIN_POSITIVE)),
        )
    } else {
        let num: f64 = r1.iter().zip(&r2).map(|(a, b)| a * b).sum();
        let den: f64 = r1.iter().map(|a| a * a).sum();
        let k = num / den;
        let d = r1
            .iter()
            .zip(&r2)
            .fold(0.0_f64, |acc, (a, b)| acc.max((b - k * a).abs()))
            / max2;
        (Some(k), d)
    };
    let k_ok = fitted_k.is_none_or(|k| ((k - expected_k) / expected_k).abs() < RESCALE_TOLERANCE);
    RescaleReport {
        check: if linear_only {
            "rescale_linear".into()
        } else {
            "rescale".into()
        },
        fitted_k,
        expected_k,
        defect,
        max_residual_original: max1,
        max_residual_rescaled: max2,
        tolerance: RESCALE_TOLERANCE,
        pass: defect.is_finite() && defect < RESCALE_TOLERANCE && k_ok,
    }
}
