//! Periodic grid, spectral differentiation and the Helmholtz inverse.
//!
//! Transform convention: the forward transform divides by `n`, so
//! `u(x_m) = sum_j u_hat[j] exp(i k_j x_m)` and Fourier multipliers act
//! directly on the stored coefficients. Wavenumbers follow the FFT ordering
//! `k_j = 2 pi j / L` for `j = 0, 1, .., n/2, -n/2+1, .., -1`; the Nyquist bin
//! `j = n/2` is zeroed by every odd-order multiplier so results stay real.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum supported resolution.
pub const MIN_POINTS: usize = 16;

/// Default period; the Helmholtz kernel tail `exp(-L/2)` is below 3e-9.
pub const DEFAULT_LENGTH: f64 = 40.0;

struct GridInner {
    n: usize,
    length: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid on `[0, L)`. Cloning is cheap.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n && self.inner.length == other.inner.length
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < MIN_POINTS || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n must be even and >= {MIN_POINTS}, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let wavenumbers = (0..n)
            .map(|i| {
                let j = if i <= n / 2 {
                    i as f64
                } else {
                    i as f64 - n as f64
                };
                2.0 * PI * j / length
            })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                length,
                wavenumbers,
                forward,
                inverse,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn dx(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n()).map(|i| self.x(i))
    }

    /// Wavenumbers in transform order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    /// Largest resolved wavenumber `pi n / L` (the Nyquist wavenumber).
    pub fn k_max(&self) -> f64 {
        PI * self.n() as f64 / self.length()
    }

    pub fn nyquist_index(&self) -> usize {
        self.n() / 2
    }

    /// Signed integer mode index of transform slot `i`.
    pub fn mode_index(&self, i: usize) -> i64 {
        let n = self.n();
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn scratch_len(&self) -> usize {
        self.inner
            .forward
            .get_inplace_scratch_len()
            .max(self.inner.inverse.get_inplace_scratch_len())
    }

    /// Forward transform into `out`, normalised by `1/n`.
    pub fn forward_into(&self, samples: &[f64], out: &mut [Complex64], scratch: &mut [Complex64]) {
        debug_assert_eq!(samples.len(), self.n());
        for (o, &s) in out.iter_mut().zip(samples) {
            *o = Complex64::new(s, 0.0);
        }
        self.inner.forward.process_with_scratch(out, scratch);
        let inv_n = 1.0 / self.n() as f64;
        for o in out.iter_mut() {
            *o *= inv_n;
        }
    }

    /// In-place inverse transform of `spectrum`; the real part is written to
    /// `out`.
    pub fn inverse_into(
        &self,
        spectrum: &mut [Complex64],
        out: &mut [f64],
        scratch: &mut [Complex64],
    ) {
        self.inner.inverse.process_with_scratch(spectrum, scratch);
        for (o, s) in out.iter_mut().zip(spectrum.iter()) {
            *o = s.re;
        }
    }

    /// Forward transform of complex data in place, normalised by `1/n`.
    pub fn fft_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inner.forward.process_with_scratch(buf, scratch);
        let inv_n = 1.0 / self.n() as f64;
        for b in buf.iter_mut() {
            *b *= inv_n;
        }
    }

    /// Unnormalised inverse transform in place.
    pub fn ifft_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inner.inverse.process_with_scratch(buf, scratch);
    }

    pub fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.n()];
        let mut scratch = vec![Complex64::default(); self.scratch_len()];
        self.forward_into(samples, &mut out, &mut scratch);
        out
    }

    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<f64> {
        let mut buf = spectrum.to_vec();
        let mut out = vec![0.0; self.n()];
        let mut scratch = vec![Complex64::default(); self.scratch_len()];
        self.inverse_into(&mut buf, &mut out, &mut scratch);
        out
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected_n: self.n(),
                expected_len: self.length(),
                got_n: other.n(),
                got_len: other.length(),
            })
        }
    }
}

/// Spectral truncation applied to the state and to nonlinear products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasRule {
    None,
    /// Keep `|k| <= (2/3) k_max`; exact for quadratic products.
    #[default]
    TwoThirds,
    /// Keep `|k| <= (2/(p+1)) k_max` with `p = 6`, the highest power of `u`
    /// in the flux.
    Strong,
}

/// Highest polynomial degree the strong cutoff protects against.
pub const STRONG_DEGREE: u32 = 6;

impl DealiasRule {
    pub fn cutoff_fraction(self) -> f64 {
        match self {
            DealiasRule::None => 1.0,
            DealiasRule::TwoThirds => 2.0 / 3.0,
            DealiasRule::Strong => 2.0 / (STRONG_DEGREE as f64 + 1.0),
        }
    }

    /// Zeroes modes above the cutoff in place.
    pub fn apply(self, grid: &Grid, spectrum: &mut [Complex64]) {
        if self == DealiasRule::None {
            return;
        }
        let limit = self.cutoff_fraction() * grid.k_max();
        for (s, &k) in spectrum.iter_mut().zip(grid.wavenumbers()) {
            if k.abs() > limit {
                *s = Complex64::default();
            }
        }
    }
}

/// A real periodic function sampled on a [`Grid`]. The spectrum is computed
/// on first use and cached.
#[derive(Clone)]
pub struct Field {
    grid: Grid,
    samples: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("grid", &self.grid)
            .field("linf", &self.linf())
            .finish()
    }
}

impl Field {
    pub fn from_samples(grid: &Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.n(),
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self::from_samples_unchecked(grid, samples))
    }

    pub(crate) fn from_samples_unchecked(grid: &Grid, samples: Vec<f64>) -> Self {
        Self {
            grid: grid.clone(),
            samples,
            spectrum: OnceLock::new(),
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_samples_unchecked(grid, vec![0.0; grid.n()])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_samples_unchecked(grid, grid.points().map(f).collect())
    }

    /// Field from coefficients in transform order; the imaginary part of the
    /// inverse transform is discarded.
    pub fn from_spectrum(grid: &Grid, spectrum: Vec<Complex64>) -> Self {
        let samples = grid.inverse(&spectrum);
        Self {
            grid: grid.clone(),
            samples,
            spectrum: OnceLock::from(spectrum),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| self.grid.forward(&self.samples))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_samples_unchecked(&self.grid, self.samples.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Field::from_samples_unchecked(
            &self.grid,
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    /// Applies `multiplier(k, is_nyquist)` to every coefficient.
    pub fn apply_multiplier(&self, multiplier: impl Fn(f64, bool) -> Complex64) -> Field {
        let nyq = self.grid.nyquist_index();
        let spec = self
            .spectrum()
            .iter()
            .zip(self.grid.wavenumbers())
            .enumerate()
            .map(|(i, (s, &k))| s * multiplier(k, i == nyq))
            .collect();
        Field::from_spectrum(&self.grid, spec)
    }

    /// Spectral first derivative.
    pub fn derivative(&self) -> Field {
        self.derivative_n(1)
    }

    /// Spectral derivative of order `order`, multiplier `(ik)^order`.
    pub fn derivative_n(&self, order: u32) -> Field {
        self.apply_multiplier(|k, nyq| {
            if nyq && order % 2 == 1 {
                Complex64::default()
            } else {
                Complex64::new(0.0, k).powu(order)
            }
        })
    }

    /// `(1 - d^2/dx^2)^{-1}`, multiplier `1/(1+k^2)`.
    pub fn helmholtz_inverse(&self) -> Field {
        self.apply_multiplier(|k, _| Complex64::new(1.0 / (1.0 + k * k), 0.0))
    }

    /// `(1 - d^2/dx^2)^{-1} d/dx`, multiplier `ik/(1+k^2)`.
    pub fn helmholtz_inverse_dx(&self) -> Field {
        self.apply_multiplier(|k, nyq| {
            if nyq {
                Complex64::default()
            } else {
                Complex64::new(0.0, k / (1.0 + k * k))
            }
        })
    }

    pub fn dealias(&self, rule: DealiasRule) -> Field {
        let mut spec = self.spectrum().to_vec();
        rule.apply(&self.grid, &mut spec);
        Field::from_spectrum(&self.grid, spec)
    }

    pub fn linf(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Trapezoidal (spectrally exact) integral over one period.
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.grid.dx()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.grid.n() as f64
    }

    pub fn l2(&self) -> f64 {
        (self.samples.iter().map(|v| v * v).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// Sobolev norm `(L sum_j (1+k_j^2)^s |u_hat_j|^2)^{1/2}`; equals the L2
    /// norm for `s = 0`.
    pub fn hs_norm(&self, s: f64) -> f64 {
        let sum: f64 = self
            .spectrum()
            .iter()
            .zip(self.grid.wavenumbers())
            .map(|(u, &k)| (1.0 + k * k).powf(s) * u.norm_sqr())
            .sum();
        (self.grid.length() * sum).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Finite trigonometric series `mean + sum_j (a_j cos k_j x + b_j sin k_j x)`
/// with `k_j = 2 pi j / L`. Evaluates pointwise without any transform, so it
/// doubles as an analytic reference for band-limited test data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    pub length: f64,
    pub mean: f64,
    /// `(mode, cos amplitude, sin amplitude)`.
    pub terms: Vec<(u32, f64, f64)>,
}

impl TrigSeries {
    /// Random series with modes `1..=max_mode`, amplitudes decaying like
    /// `1/j`, scaled so the sampled sup-norm on `grid` equals `amplitude`.
    pub fn random(grid: &Grid, max_mode: u32, amplitude: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mean = rng.gen_range(-0.5..0.5);
        let terms = (1..=max_mode)
            .map(|j| {
                let w = 1.0 / j as f64;
                (
                    j,
                    w * rng.gen_range(-1.0..1.0),
                    w * rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        let mut series = Self {
            length: grid.length(),
            mean,
            terms,
        };
        let sup = grid
            .points()
            .fold(0.0_f64, |m, x| m.max(series.eval(x).abs()));
        if sup > 0.0 {
            series.scale(amplitude / sup);
        }
        series
    }

    pub fn scale(&mut self, factor: f64) {
        self.mean *= factor;
        for t in &mut self.terms {
            t.1 *= factor;
            t.2 *= factor;
        }
    }

    pub fn max_mode(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let base = 2.0 * PI / self.length;
        self.mean
            + self
                .terms
                .iter()
                .map(|&(j, a, b)| {
                    let arg = base * j as f64 * x;
                    a * arg.cos() + b * arg.sin()
                })
                .sum::<f64>()
    }

    /// Analytic derivative of order `order`.
    pub fn eval_derivative(&self, x: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(x);
        }
        let base = 2.0 * PI / self.length;
        self.terms
            .iter()
            .map(|&(j, a, b)| {
                let k = base * j as f64;
                let arg = k * x;
                // d^m/dx^m of cos and sin cycle with period four.
                let (dc, ds) = match order % 4 {
                    0 => (arg.cos(), arg.sin()),
                    1 => (-arg.sin(), arg.cos()),
                    2 => (-arg.cos(), -arg.sin()),
                    _ => (arg.sin(), -arg.cos()),
                };
                k.powi(order as i32) * (a * dc + b * ds)
            })
            .sum()
    }

    pub fn sample(&self, grid: &Grid) -> Field {
        Field::from_fn(grid, |x| self.eval(x))
    }
}

/// Random band-limited field with modes `1..=max_mode` and sup-norm
/// `amplitude`.
pub fn random_band_limited(grid: &Grid, max_mode: u32, amplitude: f64, seed: u64) -> Field {
    TrigSeries::random(grid, max_mode, amplitude, seed).sample(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(64, DEFAULT_LENGTH).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(15, 1.0).is_err());
        assert!(Grid::new(8, 1.0).is_err());
        assert!(Grid::new(32, 0.0).is_err());
        assert!(Grid::new(32, f64::NAN).is_err());
    }

    #[test]
    fn wavenumber_ordering() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        let k = g.wavenumbers();
        assert_eq!(k[0], 0.0);
        assert!((k[1] - 1.0).abs() < 1e-15);
        assert!((k[8] - 8.0).abs() < 1e-14);
        assert!((k[9] + 7.0).abs() < 1e-14);
        assert!((k[15] + 1.0).abs() < 1e-14);
        assert_eq!(g.mode_index(8), 8);
        assert_eq!(g.mode_index(9), -7);
    }

    #[test]
    fn forward_normalisation_pinned() {
        // cos(k1 x) has coefficients 1/2 at j = +-1.
        let g = grid();
        let k1 = 2.0 * PI / g.length();
        let f = Field::from_fn(&g, |x| (k1 * x).cos() + 3.0);
        let s = f.spectrum();
        assert!((s[0].re - 3.0).abs() < 1e-14);
        assert!((s[1].re - 0.5).abs() < 1e-14);
        assert!((s[g.n() - 1].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let f = Field::from_fn(&grid(), |_| 2.5);
        assert!(f.derivative().linf() < 1e-15);
        assert!(f.helmholtz_inverse_dx().linf() < 1e-15);
        assert!((f.helmholtz_inverse().max() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn derivative_of_sine() {
        let g = grid();
        let k = 2.0 * PI / g.length();
        let f = Field::from_fn(&g, |x| (k * x).sin());
        let df = f.derivative();
        let expect = Field::from_fn(&g, |x| k * (k * x).cos());
        assert!(df.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn helmholtz_eigenfunctions() {
        let g = grid();
        let k = 2.0 * PI * 3.0 / g.length();
        let f = Field::from_fn(&g, |x| (k * x).sin());
        let h = f.helmholtz_inverse();
        let expect = Field::from_fn(&g, |x| (k * x).sin() / (1.0 + k * k));
        assert!(h.max_abs_diff(&expect).unwrap() < 1e-12);
        let hd = f.helmholtz_inverse_dx();
        let expect = Field::from_fn(&g, |x| k * (k * x).cos() / (1.0 + k * k));
        assert!(hd.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn nyquist_handling() {
        let g = grid();
        let nyq = Field::from_fn(&g, |x| (g.k_max() * x).cos());
        assert!(nyq.derivative().linf() < 1e-12);
        assert!(nyq.helmholtz_inverse_dx().linf() < 1e-12);
        // even order keeps the bin
        let d2 = nyq.derivative_n(2);
        assert!((d2.linf() - g.k_max().powi(2)).abs() < 1e-9);
        for rule in [DealiasRule::TwoThirds, DealiasRule::Strong] {
            assert!(nyq.dealias(rule).linf() < 1e-14);
        }
    }

    #[test]
    fn dealias_keeps_low_band() {
        let g = grid();
        let f = random_band_limited(&g, (g.n() / 3 / 2) as u32, 1.0, 3);
        let d = f.dealias(DealiasRule::TwoThirds);
        assert!(f.max_abs_diff(&d).unwrap() < 1e-14);
    }

    #[test]
    fn hs_zero_is_l2() {
        let g = grid();
        let f = random_band_limited(&g, 10, 1.0, 9);
        assert!((f.hs_norm(0.0) - f.l2()).abs() < 1e-12 * f.l2());
    }

    #[test]
    fn series_derivative_matches_spectral() {
        let g = grid();
        let s = TrigSeries::random(&g, 8, 1.0, 5);
        let f = s.sample(&g);
        for order in 1..=3 {
            let spectral = f.derivative_n(order);
            let analytic = Field::from_fn(&g, |x| s.eval_derivative(x, order));
            assert!(
                spectral.max_abs_diff(&analytic).unwrap() < 1e-11,
                "order {order}"
            );
        }
        assert!((f.linf() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn from_samples_validates() {
        let g = grid();
        assert!(Field::from_samples(&g, vec![0.0; 3]).is_err());
        let mut v = vec![0.0; g.n()];
        v[5] = f64::NAN;
        assert!(matches!(
            Field::from_samples(&g, v),
            Err(Error::NonFinite(5))
        ));
    }
}
