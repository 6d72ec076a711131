//! Independent reference computations used to cross-check the spectral
//! operators: direct quadrature of the periodized Helmholtz kernel, a
//! textbook Camassa-Holm right-hand side, and sixth-order finite differences.

use crate::spectral::{Field, Grid, TrigSeries};

/// Gauss-Legendre nodes and weights on `[-1, 1]` via Newton iteration on
/// `P_n`. Requires `n >= 2`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "gauss_legendre needs at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let p = p1;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `sum_{|m| <= 3} exp(-|d + m L|) / 2`, smooth for `d` in `(0, L)`.
pub fn periodized_kernel(d: f64, length: f64) -> f64 {
    (-3..=3)
        .map(|m| 0.5 * (-(d + m as f64 * length).abs()).exp())
        .sum()
}

/// `(p * f)(x)` by composite Gauss-Legendre over one period, integrating
/// in the lag `d = x - y` so the kernel's kink sits at the panel ends.
pub fn helmholtz_by_quadrature(f: &TrigSeries, x: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let l = f.length;
    let h = l / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        for (t, w) in nodes.iter().zip(&weights) {
            let d = a + 0.5 * h * (t + 1.0);
            sum += 0.5 * h * w * periodized_kernel(d, l) * f.eval(x - d);
        }
    }
    sum
}

/// Helmholtz inverse of a trigonometric series sampled on `grid`, by
/// quadrature.
pub fn helmholtz_field_by_quadrature(f: &TrigSeries, grid: &Grid) -> Field {
    let panels = (f.length.ceil() as usize).max(8) * 2;
    Field::from_fn(grid, |x| helmholtz_by_quadrature(f, x, panels, 16))
}

/// Camassa-Holm right-hand side from the local form
/// `u_t - u_txx + kappa (u_x - u_xxx) + 3 u u_x = 2 u_x u_xx + u u_xxx`,
/// solved for `u_t` with the Helmholtz inverse.
pub fn camassa_holm_rhs(u: &Field, kappa: f64) -> Field {
    let ux = u.derivative();
    let uxx = ux.derivative();
    let uxxx = uxx.derivative();
    let n = u.grid().n();
    let s: Vec<f64> = (0..n)
        .map(|i| {
            let (v, v1, v2, v3) = (
                u.samples()[i],
                ux.samples()[i],
                uxx.samples()[i],
                uxxx.samples()[i],
            );
            -kappa * (v1 - v3) - 3.0 * v * v1 + 2.0 * v1 * v2 + v * v3
        })
        .collect();
    Field::from_samples(u.grid(), s)
        .expect("finite input gives finite products")
        .helmholtz_inverse()
}

/// Sixth-order central difference for `d/dx` on a periodic grid.
pub fn fd6_derivative(u: &Field) -> Field {
    let n = u.grid().n();
    let h = u.grid().dx();
    let s = u.samples();
    let at = |i: isize| s[i.rem_euclid(n as isize) as usize];
    let d = (0..n as isize)
        .map(|i| {
            (-at(i - 3) + 9.0 * at(i - 2) - 45.0 * at(i - 1) + 45.0 * at(i + 1) - 9.0 * at(i + 2)
                + at(i + 3))
                / (60.0 * h)
        })
        .collect();
    Field::from_samples(u.grid(), d).expect("finite input")
}
