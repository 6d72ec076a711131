use proptest::prelude::*;
use vortsw::coeffs::{model_coefficients, GeneralCoefficients};
use vortsw::model_forms::{
    residual_of, rhs_nonlocal, verify_form_equivalence, verify_rescale, LocalForm, RhsWorkspace,
    ScaleParams, TestFunction,
};
use vortsw::oracles::camassa_holm_rhs;
use vortsw::solver::{integrate, SimConfig, TimeStep};
use vortsw::spectral::{random_band_limited, DealiasRule, Field, Grid, DEFAULT_LENGTH};

fn grid(n: usize) -> Grid {
    Grid::new(n, DEFAULT_LENGTH).unwrap()
}

#[test]
fn advection_rhs_is_minus_speed_times_slope() {
    let g = grid(64);
    let u = random_band_limited(&g, 10, 1.0, 5);
    let rhs = rhs_nonlocal(&u, &GeneralCoefficients::advection(1.7));
    let want = u.derivative().map(|v| -1.7 * v);
    assert!(rhs.max_abs_diff(&want).unwrap() < 1e-13);
}

#[test]
fn small_waves_follow_linear_dispersion() {
    // the frequency comes from the local rescaled form, the evolution from the
    // nonlocal one
    let m = model_coefficients(1.5).unwrap();
    let gc = m.normalize().unwrap();
    let omega_of = |k: f64| LocalForm::rescaled(&m).linear_frequency(k);
    let g = grid(64);
    let eps = 1e-7;
    for mode in [1u32, 4, 9] {
        let k = 2.0 * std::f64::consts::PI * mode as f64 / g.length();
        let u0 = Field::from_fn(&g, |x| eps * (k * x).cos());
        let t_end = 2.0;
        let cfg = SimConfig::new(g.clone(), gc, t_end, TimeStep::Fixed(0.005));
        let traj = integrate(&cfg, &u0).unwrap();
        let w = omega_of(k);
        let want = Field::from_fn(&g, |x| eps * (k * x - w * t_end).cos());
        let err = traj.final_state().max_abs_diff(&want).unwrap() / eps;
        assert!(err < 1e-6, "mode {mode}: relative error {err:e}");
    }
}

#[test]
fn original_dispersion_relation_at_speed_two() {
    // w = k (c + beta0 mu k^2) / (1 + beta mu k^2) at c = 2
    let m = model_coefficients(1.5).unwrap();
    let s = ScaleParams::new(0.2, 0.008).unwrap();
    let k = 1.3;
    let mu = 0.008;
    let want = k * (2.0 + 17.0 / 350.0 * mu * k * k) / (1.0 + 43.0 / 1050.0 * mu * k * k);
    let got = LocalForm::original(&m, &s).linear_frequency(k);
    assert!((got - want).abs() < 1e-14 * want);
}

#[test]
fn plane_wave_on_dispersion_branch_solves_linear_form() {
    let m = model_coefficients(0.4).unwrap();
    let s = ScaleParams::new(0.1, 0.02).unwrap();
    for k in [0.3, 1.0, 2.5] {
        let omega = LocalForm::original(&m, &s).linear_frequency(k);
        let r = verify_rescale(
            &TestFunction::PlaneWave { amp: 0.2, k, omega },
            &s,
            &m,
            true,
        );
        assert!(r.pass, "{r:?}");
        // off the branch it must not vanish
        let off = TestFunction::PlaneWave {
            amp: 0.2,
            k,
            omega: omega * 1.01,
        };
        let form = LocalForm::original(&m, &s).linear_part();
        let j = off.jet(0.3, 0.7);
        assert!(form.residual(&j).abs() > 1e-6 * form.magnitude(&j));
    }
}

#[test]
fn rescale_factor_matches_closed_form() {
    let m = model_coefficients(1.5).unwrap();
    let s = ScaleParams::new(0.2, 0.008).unwrap();
    let stretch = (43.0_f64 / 1050.0 * 0.008).sqrt();
    assert!((s.stretch(&m) - stretch).abs() < 1e-15);
    assert!((s.rescale_factor(&m) - 1.4 * 0.2 * stretch).abs() < 1e-15);
    for (eps, mu) in [(0.05, 0.001), (0.3, 0.05)] {
        let s = ScaleParams::new(eps, mu).unwrap();
        let bump = TestFunction::GaussianBump {
            amp: 0.4,
            x0: 0.2,
            width: 0.8,
            speed: 1.1,
            decay: 0.5,
        };
        let r = verify_rescale(&bump, &s, &m, false);
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn scale_params_reject_nonpositive() {
    assert!(ScaleParams::new(0.0, 0.1).is_err());
    assert!(ScaleParams::new(0.1, -1.0).is_err());
    assert!(ScaleParams::new(f64::NAN, 0.1).is_err());
}

#[test]
fn local_form_residual_vanishes_on_nonlocal_solution() {
    let m = model_coefficients(2.0).unwrap();
    let g = grid(128);
    let u = random_band_limited(&g, 10, 0.5, 77);
    let ut = rhs_nonlocal(&u, &m.normalize().unwrap());
    let r = residual_of(&LocalForm::rescaled(&m), &u, &ut).unwrap();
    assert!(r.linf() < 1e-9, "{:e}", r.linf());
}

#[test]
fn dealiased_rhs_has_no_high_modes() {
    let m = model_coefficients(1.5).unwrap();
    let g = grid(64);
    let u = random_band_limited(&g, 20, 1.0, 8);
    let mut ws = RhsWorkspace::new(&g);
    for rule in [DealiasRule::TwoThirds, DealiasRule::Strong] {
        let r = ws.rhs(&u, &m.normalize().unwrap(), rule).unwrap();
        let limit = rule.cutoff_fraction() * g.k_max();
        for (c, k) in r.spectrum().iter().zip(g.wavenumbers()) {
            if k.abs() > limit {
                assert!(c.norm() < 1e-14, "{rule:?} k={k}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn camassa_holm_oracle_agrees(seed in any::<u64>(), kappa in -3.0f64..3.0, modes in 1u32..24) {
        let g = grid(128);
        let u = random_band_limited(&g, modes, 1.0, seed);
        let ours = rhs_nonlocal(&u, &GeneralCoefficients::camassa_holm(kappa));
        let theirs = camassa_holm_rhs(&u, kappa);
        prop_assert!(ours.max_abs_diff(&theirs).unwrap() < 1e-12 * theirs.linf().max(1.0));
    }

    #[test]
    fn forms_agree_for_any_vorticity(seed in any::<u64>(), log_a in -3.0f64..1.0) {
        let m = model_coefficients(10f64.powf(log_a)).unwrap();
        let u = random_band_limited(&grid(128), 12, 1.0, seed);
        let r = verify_form_equivalence(&u, &m).unwrap();
        prop_assert!(r.pass, "{r:?}");
    }

    #[test]
    fn rhs_is_odd_for_odd_flux(seed in any::<u64>(), speed in -2.0f64..2.0) {
        // purely linear coefficients: rhs(-u) = -rhs(u)
        let g = grid(64);
        let u = random_band_limited(&g, 12, 1.0, seed);
        let c = GeneralCoefficients { beta1: 0.4, ..GeneralCoefficients::advection(speed) };
        let a = rhs_nonlocal(&u, &c);
        let b = rhs_nonlocal(&u.map(|v| -v), &c).map(|v| -v);
        prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-13);
    }
}
