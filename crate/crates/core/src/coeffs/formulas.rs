//! Printed rational formulas of the model, written once and evaluated over
//! any [`Scalar`] (double precision for production, exact rationals for the
//! transcription checks).
//!
//! Every polynomial is stored highest degree first, exactly as it appears in
//! the source formulas. Where the source prints an expanded denominator it is
//! kept expanded here; the factored forms live in the identity suite.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Field arithmetic needed by the coefficient formulas.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

fn k<T: Scalar>(v: i64) -> T {
    T::from_i64(v)
}

/// Horner evaluation, coefficients highest degree first.
pub fn horner<T: Scalar>(x: &T, coeffs: &[i64]) -> T {
    let mut acc = k::<T>(0);
    for &a in coeffs {
        acc = acc * x.clone() + k(a);
    }
    acc
}

pub fn powi<T: Scalar>(x: &T, n: u32) -> T {
    let mut acc = k::<T>(1);
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}

/// All printed constants at one wave speed `c`.
///
/// `b[i]` holds `B_{i+1}`; `b19` and `b20` are absent because they depend on
/// the unprinted reconstruction coefficients `gamma_7`, `gamma_8`.
#[derive(Debug, Clone, PartialEq)]
pub struct Formulas<T> {
    pub c: T,
    /// Vorticity recovered from `c` through `A = c - 1/c`.
    pub vorticity: T,
    pub alpha: T,
    pub beta: T,
    pub beta0: T,
    pub omega: [T; 7],
    pub z0_sq: T,
    pub z_sq: T,
    pub c8: T,
    pub c9: T,
    pub c10: T,
    pub a: [T; 10],
    pub b: [T; 18],
    pub gamma6: T,
    pub gamma6_times_1_minus_nu: T,
}

/// `(c^2+c+1)(c^2-c+1)`, which equals `c^4+c^2+1`.
fn e4<T: Scalar>(c: &T) -> T {
    (horner(c, &[1, 1, 1])) * horner(c, &[1, -1, 1])
}

/// `c^2 + 1`.
fn q<T: Scalar>(c: &T) -> T {
    horner(c, &[1, 0, 1])
}

pub fn alpha<T: Scalar>(c: &T) -> T {
    horner(c, &[1, 0, 1, 0, 1]) / (k::<T>(3) * q(c))
}

pub fn beta<T: Scalar>(c: &T) -> T {
    horner(c, &[1, 0, 6, 0, 3]) / horner(c, &[2, 0, 6, 0, 8, 0, 6, 0, 2])
}

pub fn beta0<T: Scalar>(c: &T) -> T {
    horner(c, &[1, 0, 14, 0, 5, 0, -2]) / horner(c, &[6, 0, 18, 0, 24, 0, 18, 0, 6, 0])
}

pub fn omega<T: Scalar>(c: &T) -> [T; 7] {
    let cm1 = c.clone() - k(1);
    let cp1 = c.clone() + k(1);
    let q = q(c);
    let d = e4(c) * powi(&q, 5);

    let w1 =
        powi(c, 5) * horner(c, &[1, 0, -1]) * horner(c, &[1, 0, 2]) / (k::<T>(2) * powi(&q, 3));
    let w2 = powi(c, 6) * powi(&cm1, 2) * powi(&cp1, 2) * horner(c, &[1, 0, 4, 0, 6])
        / (k::<T>(6) * powi(&q, 5));
    let w3 = powi(c, 7)
        * powi(&cm1, 3)
        * powi(&cp1, 3)
        * horner(c, &[1, 0, 4])
        * horner(c, &[1, 0, 2, 0, 6])
        / (k::<T>(24) * powi(&q, 7));
    let w4 = powi(c, 8) * powi(&cm1, 4) * powi(&cp1, 4) / (k::<T>(120) * powi(&q, 9))
        * horner(c, &[1, 0, 8, 0, 28, 0, 36, 0, 120]);
    let w5 = -(horner(
        c,
        &[2, 0, 17, 0, 37, 0, 115, 0, 189, 0, 152, 0, 54, 0, 10, 0],
    ) / (k::<T>(12) * d.clone()));
    let w6 = k::<T>(-1) / (k::<T>(12) * d.clone())
        * horner(
            c,
            &[
                4, 4, 26, 34, 79, 137, 126, 314, 131, 402, 95, 290, 50, 109, 23, 18, 6,
            ],
        );
    let w7 = k::<T>(-1) / (k::<T>(6) * d)
        * horner(
            c,
            &[
                4, 2, 32, 23, 115, 100, 216, 319, 269, 485, 233, 376, 140, 137, 59, 22, 12,
            ],
        );
    [w1, w2, w3, w4, w5, w6, w7]
}

/// Square of the height parameter `z0`.
pub fn z0_sq<T: Scalar>(c: &T) -> T {
    let e = e4(c);
    k::<T>(6) * e.clone() * horner(c, &[2, 0, 14, 0, 23, 0, 0, 0, -3])
        / (k::<T>(36) * e.clone() * e * powi(&q(c), 2))
}

pub fn c8_c9_c10<T: Scalar>(c: &T) -> (T, T, T) {
    let den = k::<T>(6) * powi(c, 2) * powi(&q(c), 4);
    let c8 = horner(c, &[2, 0, 13, 0, 19, 0, 38, 0, 33, 0, 9]) / den.clone();
    let c9 = horner(c, &[1, 0, 3, 0, 2, 0, 28, 0, 21, 0, 5]) / den;
    let c10 = horner(c, &[3, 0, 15, 0, 13, 0, 52, 0, 44, 0, 11])
        / (k::<T>(3) * powi(c, 2) * powi(&q(c), 4));
    (c8, c9, c10)
}

/// Surface-equation coefficients `A_1..A_10`.
pub fn surface_a<T: Scalar>(c: &T) -> [T; 10] {
    let q = q(c);
    let (c8, c9, c10) = c8_c9_c10(c);
    let a1 = -(horner(c, &[1, 0, 4, 0, 1]) / (k::<T>(2) * powi(&q, 2)));
    let a2 = horner(c, &[1, 0, 6, 0, 4, 0, 6, 0, 1]) / (k::<T>(3) * powi(&q, 4));
    let a3 = -(horner(c, &[1, 0, 8, 0, 9, 0, 24, 0, 9, 0, 8, 0, 1]) / (k::<T>(4) * powi(&q, 6)));
    let a4 = k::<T>(1) / (k::<T>(5) * powi(&q, 8))
        * horner(
            c,
            &[1, 0, 10, 0, 16, 0, 60, 0, 36, 0, 60, 0, 16, 0, 10, 0, 1],
        );
    let a5 = k::<T>(-1) / (k::<T>(6) * powi(&q, 10))
        * horner(
            c,
            &[
                1, 0, 12, 0, 25, 0, 120, 0, 100, 0, 240, 0, 100, 0, 120, 0, 25, 0, 12, 0, 1,
            ],
        );
    let a6 = -(horner(c, &[2, 0, 4, 0, 11, 0, 6]) / (k::<T>(3) * powi(c, 2) * powi(&q, 2)));
    let a7 = -(horner(c, &[1, 0, 6, 0, 3]) / (k::<T>(3) * powi(c, 2) * powi(&q, 2)));
    [a1, a2, a3, a4, a5, a6, a7, -c8, -c9, -c10]
}

/// `gamma_6` and the product `gamma_6 (1 - nu)` fixed by the CH-structure
/// constraint, with `(c - A) = 1/c` and `(2c - A) = (c^2+1)/c` substituted.
pub fn gamma6_pair<T: Scalar>(c: &T) -> (T, T) {
    let q = q(c);
    // 2(3c^2 - 3Ac + A^2) / (3(2c - A)) = 2(c^4+c^2+1) / (3c(c^2+1))
    let factor = k::<T>(2) * e4(c) / (k::<T>(3) * c.clone() * q.clone());
    let gamma6 = horner(c, &[4, 0, 7, 0, -14, 0, -9]) / (k::<T>(18) * powi(&q, 3)) / factor.clone();
    let product = -(horner(c, &[1, 0, 6, 0, 3]) / (k::<T>(3) * powi(&q, 3))) / factor;
    (gamma6, product)
}

/// u-equation coefficients `B_1..B_18`; `z_sq` is the squared height.
pub fn u_equation_b<T: Scalar>(c: &T, z_sq: &T) -> [T; 18] {
    let cm1 = c.clone() - k(1);
    let cp1 = c.clone() + k(1);
    let q = q(c);
    let e = e4(c);
    let (gamma6, g6p) = gamma6_pair(c);
    let g6nu = gamma6 - g6p.clone();

    let b1 = powi(c, 3) * horner(c, &[3, 0, 5, 0, 2, 0, 2]) / (k::<T>(2) * powi(&q, 2));
    let b2 = powi(c, 4) * cp1.clone() * cm1.clone() * horner(c, &[7, 0, 24, 0, 24, 0, 9, 0, 6])
        / (k::<T>(6) * powi(&q, 4));
    let b3 = powi(c, 5) * powi(&cp1, 2) * powi(&cm1, 2) / (k::<T>(24) * powi(&q, 6))
        * horner(c, &[15, 0, 79, 0, 160, 0, 142, 0, 40, 0, 24]);
    let b4 = powi(c, 6)
        * powi(&cm1, 3)
        * powi(&cp1, 3)
        * horner(c, &[31, 0, 222, 0, 660, 0, 1043, 0, 854, 0, 190, 0, 120])
        / (k::<T>(120) * powi(&q, 8));
    // The source prints "6892^6"; read as 6892 c^6.
    let b5 = powi(c, 7)
        * powi(&cm1, 4)
        * powi(&cp1, 4)
        * horner(
            c,
            &[
                63, 0, 573, 0, 2266, 0, 5006, 0, 6892, 0, 5748, 0, 936, 0, 720,
            ],
        )
        / (k::<T>(720) * powi(&q, 10));
    let b6 = e.clone() / k(2) * z_sq.clone()
        - k::<T>(1) / (k::<T>(6) * powi(&q, 2)) * horner(c, &[1, 0, 1, 0, -6, 0, -21, 0, -9]);
    let b7 = e.clone() / k(2) * z_sq.clone()
        - cm1.clone() * cp1.clone() * horner(c, &[1, 0, 3]) * horner(c, &[1, 0, 3, 0, 1])
            / (k::<T>(6) * q.clone());
    // The source prints "2C^{12}" and "82^6"; read as 2c^12 and 82c^6.
    let b8 = z_sq.clone() / (k::<T>(12) * powi(&q, 4))
        * horner(
            c,
            &[15, -6, 57, -24, 87, -42, 75, -42, 42, -24, 12, -6, 0, 0],
        )
        - k::<T>(1) / (k::<T>(12) * powi(&q, 4))
            * horner(c, &[5, 2, 27, 0, 43, 46, 5, 82, -74, 84, -44, 50, -10, 12]);
    let b9 = powi(c, 2) * cm1.clone() * e.clone() * z_sq.clone() / (k::<T>(2) * q.clone())
        - horner(c, &[1, 1, 0, 3, -14, 8, -38, 14, -60, 15, -38, 10, -9, 3])
            / (k::<T>(6) * powi(&q, 4));
    let b10 = powi(c, 2) * z_sq.clone() / (k::<T>(2) * powi(&q, 2))
        * horner(c, &[7, -4, 13, -8, 10, -8, 6, -4])
        - horner(
            c,
            &[7, 4, 27, 18, 17, 62, -55, 110, -166, 114, -100, 70, -22, 18],
        ) / (k::<T>(6) * powi(&q, 4));

    let b11 =
        powi(c, 5) * horner(c, &[1, 0, -1]) * horner(c, &[1, 0, 2]) / (k::<T>(2) * powi(&q, 3));
    let b12 = powi(c, 6) * powi(&cm1, 2) * powi(&cp1, 2) * horner(c, &[1, 0, 4, 0, 6])
        / (k::<T>(6) * powi(&q, 5));
    let b13 = powi(c, 7)
        * powi(&cm1, 3)
        * powi(&cp1, 3)
        * horner(c, &[1, 0, 4])
        * horner(c, &[1, 0, 2, 0, 6])
        / (k::<T>(24) * powi(&q, 7));
    let b14 =
        powi(c, 8) * powi(&cm1, 4) * powi(&cp1, 4) * horner(c, &[1, 0, 8, 0, 28, 0, 36, 0, 120])
            / (k::<T>(120) * powi(&q, 9));
    let b15 = powi(c, 9)
        * powi(&cm1, 5)
        * powi(&cp1, 5)
        * horner(c, &[1, 0, 10, 0, 44, 0, 152, 0, -108, 0, 720])
        / (k::<T>(720) * powi(&q, 11));
    // gamma6 (1 - 3 nu) = gamma6 (1 - nu) - 2 gamma6 nu
    let b16 = e.clone() * (g6p.clone() - k::<T>(2) * g6nu) / (c.clone() * q.clone())
        + horner(c, &[2, 0, 7, 0, 14, 0, 6]) / (k::<T>(3) * powi(&q, 3));
    let b17 = e * g6p.clone() / (c.clone() * q.clone())
        + horner(c, &[1, 0, 6, 0, 3]) / (k::<T>(3) * powi(&q, 3));
    let b18 = g6p / (k::<T>(2) * powi(&q, 5))
        * horner(c, &[1, 0, 3, 0, 1, 0, -3, 0, -2, 0, 0, 0, 0])
        + horner(c, &[1, 0, 4, 0, 9, 0, 37, 0, 24, 0, 5]) * c.clone() / (k::<T>(6) * powi(&q, 5));

    [
        b1, b2, b3, b4, b5, b6, b7, b8, b9, b10, b11, b12, b13, b14, b15, b16, b17, b18,
    ]
}

/// Evaluates every printed constant at wave speed `c`. `z_sq` overrides the
/// squared height used by `B_6..B_10`; `None` means `z0^2`.
pub fn evaluate<T: Scalar>(c: &T, z_sq: Option<&T>) -> Formulas<T> {
    let z0_sq = z0_sq(c);
    let z_sq = z_sq.cloned().unwrap_or_else(|| z0_sq.clone());
    let (c8, c9, c10) = c8_c9_c10(c);
    let (gamma6, gamma6_times_1_minus_nu) = gamma6_pair(c);
    Formulas {
        c: c.clone(),
        vorticity: c.clone() - k::<T>(1) / c.clone(),
        alpha: alpha(c),
        beta: beta(c),
        beta0: beta0(c),
        omega: omega(c),
        b: u_equation_b(c, &z_sq),
        z0_sq,
        z_sq,
        c8,
        c9,
        c10,
        a: surface_a(c),
        gamma6,
        gamma6_times_1_minus_nu,
    }
}
