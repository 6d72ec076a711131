//! Model constants derived from the vorticity `A`.
//!
//! The linear wave speed follows the Burns condition `c^2 - A c - 1 = 0`
//! (right-going root). All other constants are rational functions of `c`.

pub mod exact;
pub mod formulas;
mod identities;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

pub use identities::{
    identity_suite, identity_suite_for, IdentityCheck, IdentityReport, IDENTITY_TOLERANCE,
};

/// Right-going linear wave speed over a shear current of vorticity `a`.
pub fn burns_speed(a: f64) -> Result<f64> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::InvalidVorticity(a));
    }
    Ok(0.5 * (a + (a * a + 4.0).sqrt()))
}

/// Constants of the local (unscaled) form of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelCoefficients {
    #[serde(rename = "A")]
    pub vorticity: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub beta0: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub omega4: f64,
    pub omega5: f64,
    pub omega6: f64,
    pub omega7: f64,
    pub z0: f64,
}

impl ModelCoefficients {
    pub fn omegas(&self) -> [f64; 7] {
        [
            self.omega1,
            self.omega2,
            self.omega3,
            self.omega4,
            self.omega5,
            self.omega6,
            self.omega7,
        ]
    }

    /// Coefficients of the nonlocal form after the `alpha eps`, `sqrt(beta mu)`
    /// rescaling.
    pub fn normalize(&self) -> Result<GeneralCoefficients> {
        normalize(self)
    }
}

/// Coefficients of the generalised nonlocal Cauchy problem
///
/// `u_t + (a1 + a2 u + a3 u^2) u_x
///     = L^{-2}[ d_x( sum_i b_i u^i + b7 u_x^2 + b8 u u_x^2 ) + gamma u_x^3 ]`
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GeneralCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
    pub beta6: f64,
    pub beta7: f64,
    pub beta8: f64,
    pub gamma: f64,
}

impl GeneralCoefficients {
    /// Camassa-Holm sub-case with linear advection speed `kappa`.
    pub fn camassa_holm(kappa: f64) -> Self {
        Self {
            alpha1: kappa,
            alpha2: 1.0,
            beta2: -1.0,
            beta7: -0.5,
            ..Self::default()
        }
    }

    /// Pure linear advection `u_t + speed u_x = 0`.
    pub fn advection(speed: f64) -> Self {
        Self {
            alpha1: speed,
            ..Self::default()
        }
    }

    /// `beta1..beta6`, the polynomial flux weights.
    pub fn polynomial_flux(&self) -> [f64; 6] {
        [
            self.beta1, self.beta2, self.beta3, self.beta4, self.beta5, self.beta6,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.polynomial_flux().iter().all(|v| v.is_finite())
            && [
                self.alpha1,
                self.alpha2,
                self.alpha3,
                self.beta7,
                self.beta8,
                self.gamma,
            ]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Intermediate constants of the derivation: the surface-equation list
/// `A_1..A_10`, the u-equation list `B_1..B_20`, `c_8..c_10` and the
/// reconstruction constants fixed by the CH-structure constraint.
///
/// `B_19` and `B_20` depend on the reconstruction constants `gamma_7` and
/// `gamma_8`, which have no closed form available, so they are never
/// populated.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedIntermediates {
    pub vorticity: f64,
    pub c: f64,
    /// Height at which `B_6..B_10` are evaluated.
    pub z: f64,
    b: [f64; 18],
    a: [f64; 10],
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub gamma6: f64,
    pub gamma6_times_1_minus_nu: f64,
}

impl DerivedIntermediates {
    /// `B_i` for `i` in `1..=20`; `None` for `B_19`, `B_20` and out of range.
    pub fn b(&self, i: usize) -> Option<f64> {
        (1..=18).contains(&i).then(|| self.b[i - 1])
    }

    /// `A_i` for `i` in `1..=10`.
    pub fn a(&self, i: usize) -> Option<f64> {
        (1..=10).contains(&i).then(|| self.a[i - 1])
    }
}

impl Serialize for DerivedIntermediates {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("A", &self.vorticity)?;
        map.serialize_entry("c", &self.c)?;
        map.serialize_entry("z", &self.z)?;
        for i in 1..=20 {
            map.serialize_entry(&format!("B{i}"), &self.b(i))?;
        }
        map.serialize_entry("c8", &self.c8)?;
        map.serialize_entry("c9", &self.c9)?;
        map.serialize_entry("c10", &self.c10)?;
        for i in 1..=10 {
            map.serialize_entry(&format!("A{i}"), &self.a[i - 1])?;
        }
        map.serialize_entry("gamma6", &self.gamma6)?;
        map.serialize_entry("gamma6_times_1_minus_nu", &self.gamma6_times_1_minus_nu)?;
        map.end()
    }
}

pub fn model_coefficients(a: f64) -> Result<ModelCoefficients> {
    let c = burns_speed(a)?;
    let w = formulas::omega(&c);
    Ok(ModelCoefficients {
        vorticity: a,
        c,
        alpha: formulas::alpha(&c),
        beta: formulas::beta(&c),
        beta0: formulas::beta0(&c),
        omega1: w[0],
        omega2: w[1],
        omega3: w[2],
        omega4: w[3],
        omega5: w[4],
        omega6: w[5],
        omega7: w[6],
        z0: formulas::z0_sq(&c).sqrt(),
    })
}

pub fn derived_intermediates(a: f64) -> Result<DerivedIntermediates> {
    derived_intermediates_at_height(a, None)
}

/// Like [`derived_intermediates`] but with `B_6..B_10` evaluated at height
/// `z` instead of `z0`.
pub fn derived_intermediates_at_height(a: f64, z: Option<f64>) -> Result<DerivedIntermediates> {
    let c = burns_speed(a)?;
    if let Some(z) = z {
        if !z.is_finite() {
            return Err(invalid("z", "height must be finite"));
        }
    }
    let z_sq = z.map(|z| z * z);
    let f = formulas::evaluate(&c, z_sq.as_ref());
    Ok(DerivedIntermediates {
        vorticity: a,
        c,
        z: z.unwrap_or_else(|| f.z0_sq.sqrt()),
        b: f.b,
        a: f.a,
        c8: f.c8,
        c9: f.c9,
        c10: f.c10,
        gamma6: f.gamma6,
        gamma6_times_1_minus_nu: f.gamma6_times_1_minus_nu,
    })
}

pub fn normalize(m: &ModelCoefficients) -> Result<GeneralCoefficients> {
    if m.alpha == 0.0 {
        return Err(Error::DegenerateCoefficient("alpha"));
    }
    if m.beta == 0.0 {
        return Err(Error::DegenerateCoefficient("beta"));
    }
    let a2 = m.alpha * m.alpha;
    let a2b = a2 * m.beta;
    Ok(GeneralCoefficients {
        alpha1: m.beta0 / m.beta,
        alpha2: 1.0,
        alpha3: m.omega5 / a2b,
        beta1: m.beta0 / m.beta - m.c,
        beta2: -1.0,
        beta3: (m.omega5 - m.beta * m.omega1) / (3.0 * a2b),
        beta4: -m.omega2 / (4.0 * a2 * m.alpha),
        beta5: -m.omega3 / (5.0 * a2 * a2),
        beta6: -m.omega4 / (6.0 * a2 * a2 * m.alpha),
        beta7: -0.5,
        beta8: (m.omega7 - 6.0 * m.omega5) / (2.0 * a2b),
        gamma: (2.0 * (m.omega5 + m.omega6) - m.omega7) / (2.0 * a2b),
    })
}

/// Leading-order surface elevation `eta = u / (c - A)`; first order in `eps`.
pub fn leading_order_elevation(u: f64, m: &ModelCoefficients) -> f64 {
    u / (m.c - m.vorticity)
}
