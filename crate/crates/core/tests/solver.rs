use std::f64::consts::PI;

use proptest::prelude::*;
use vortsw::coeffs::{model_coefficients, GeneralCoefficients};
use vortsw::solver::mms::{mms_error, ManufacturedForcing, ManufacturedSpec};
use vortsw::solver::{
    breaking_monitor, cfl_time_step, h1_growth_check, integrate, step_rk4, BreakingThresholds,
    Forcing, SimConfig, Stepper, Termination, TimeStep, Verdict,
};
use vortsw::spectral::{random_band_limited, DealiasRule, Field, Grid, TrigSeries, DEFAULT_LENGTH};
use vortsw::Error;

fn grid(n: usize) -> Grid {
    Grid::new(n, DEFAULT_LENGTH).unwrap()
}

fn model() -> GeneralCoefficients {
    model_coefficients(1.5).unwrap().normalize().unwrap()
}

fn sech2(x: f64) -> f64 {
    0.25 / ((x - 20.0) / 2.0).cosh().powi(2)
}

#[test]
fn zero_data_stays_zero() {
    let g = grid(64);
    let cfg = SimConfig::new(g.clone(), model(), 1.0, TimeStep::Fixed(0.1));
    let traj = integrate(&cfg, &Field::zeros(&g)).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert_eq!(traj.steps, 10);
    assert!(traj.final_state().samples().iter().all(|&v| v == 0.0));
    for r in &traj.records {
        assert_eq!(
            [
                r.sup_u,
                r.min_ux,
                r.max_ux,
                r.h1,
                r.hs,
                r.breaking_integral,
                r.ch_energy
            ],
            [0.0; 7]
        );
    }
}

#[test]
fn advection_translates_exactly_over_one_period() {
    let g = grid(64);
    let s = TrigSeries::random(&g, 6, 1.0, 12);
    let speed = 2.0;
    let t_end = DEFAULT_LENGTH / speed;
    let cfg = SimConfig::new(
        g.clone(),
        GeneralCoefficients::advection(speed),
        t_end,
        TimeStep::Fixed(0.01),
    );
    let traj = integrate(&cfg, &s.sample(&g)).unwrap();
    let err = traj.final_state().max_abs_diff(&s.sample(&g)).unwrap();
    assert!(err < 1e-8, "{err:e}");

    // and at a generic time
    let t = 3.3;
    let cfg = SimConfig::new(
        g.clone(),
        GeneralCoefficients::advection(speed),
        t,
        TimeStep::Fixed(0.01),
    );
    let traj = integrate(&cfg, &s.sample(&g)).unwrap();
    let want = Field::from_fn(&g, |x| s.eval(x - speed * t));
    assert!(traj.final_state().max_abs_diff(&want).unwrap() < 1e-9);
}

#[test]
fn backward_run_returns_to_start() {
    // u_t = -a u_x with speed a, then -a: the second run undoes the first
    let g = grid(64);
    let u0 = random_band_limited(&g, 8, 1.0, 4);
    let fwd = SimConfig::new(
        g.clone(),
        GeneralCoefficients::advection(1.3),
        2.0,
        TimeStep::Fixed(0.02),
    );
    let mid = integrate(&fwd, &u0).unwrap().final_state().clone();
    let back = SimConfig::new(
        g.clone(),
        GeneralCoefficients::advection(-1.3),
        2.0,
        TimeStep::Fixed(0.02),
    );
    let end = integrate(&back, &mid).unwrap();
    assert!(end.final_state().max_abs_diff(&u0).unwrap() < 1e-9);
}

#[test]
fn camassa_holm_conserves_mass_and_energy() {
    let g = grid(256);
    let u0 = Field::from_fn(&g, sech2);
    let cfg = SimConfig::new(
        g.clone(),
        GeneralCoefficients::camassa_holm(0.5),
        2.0,
        TimeStep::Fixed(0.01),
    );
    let traj = integrate(&cfg, &u0).unwrap();
    let m0 = u0.integral();
    assert!((traj.final_state().integral() - m0).abs() < 1e-12 * m0);
    let e0 = traj.records[0].ch_energy;
    for r in &traj.records {
        assert!((r.ch_energy - e0).abs() < 1e-8 * e0);
    }
}

#[test]
fn model_conserves_mass_without_cubic_slope_term() {
    let g = grid(128);
    let u0 = random_band_limited(&g, 6, 0.3, 19);
    let mut c = model();
    c.gamma = 0.0;
    let cfg = SimConfig::new(g.clone(), c, 1.0, TimeStep::Fixed(0.01));
    let traj = integrate(&cfg, &u0).unwrap();
    assert!((traj.final_state().mean() - u0.dealias(DealiasRule::TwoThirds).mean()).abs() < 1e-13);
}

#[test]
fn resolutions_converge_on_smooth_data() {
    // the large cubic-slope coefficients steepen quickly, so the check is on
    // the rate of agreement rather than on n = 128 alone
    let run = |n: usize| {
        let g = grid(n);
        let cfg = SimConfig::new(g.clone(), model(), 1.0, TimeStep::Fixed(0.005));
        integrate(&cfg, &Field::from_fn(&g, sech2))
            .unwrap()
            .final_state()
            .clone()
    };
    let gap = |a: &Field, b: &Field| {
        a.samples()
            .iter()
            .zip(b.samples().iter().step_by(2))
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
    };
    let (a, b, c) = (run(128), run(256), run(512));
    let (g1, g2) = (gap(&a, &b), gap(&b, &c));
    assert!(g2 < 1e-5, "{g2:e}");
    assert!(g1 / g2 > 50.0, "{g1:e} -> {g2:e}");
}

#[test]
fn cfl_mode_lands_on_t_end() {
    let g = grid(128);
    let u0 = Field::from_fn(&g, sech2);
    let cfg = SimConfig::new(g.clone(), model(), 0.77, TimeStep::Cfl(0.4));
    let traj = integrate(&cfg, &u0).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    assert!((traj.final_time - 0.77).abs() < 1e-12);
    let dt0 = cfl_time_step(u0.samples(), &model(), &g, 0.4);
    assert!(traj.steps as f64 >= 0.77 / dt0 - 1.0);
}

#[test]
fn fixed_step_count_is_ceiling() {
    let g = grid(32);
    let u0 = random_band_limited(&g, 3, 0.1, 1);
    for (t_end, dt, steps) in [(1.0, 0.1, 10), (1.0, 0.3, 4), (0.3, 0.1, 3)] {
        let cfg = SimConfig::new(g.clone(), model(), t_end, TimeStep::Fixed(dt));
        let traj = integrate(&cfg, &u0).unwrap();
        assert_eq!(traj.steps, steps, "t_end={t_end} dt={dt}");
        assert_eq!(traj.final_time, t_end);
    }
}

#[test]
fn snapshots_follow_stride() {
    let g = grid(32);
    let mut cfg = SimConfig::new(g.clone(), model(), 1.0, TimeStep::Fixed(0.1));
    cfg.snapshot_stride = 3;
    let traj = integrate(&cfg, &random_band_limited(&g, 3, 0.1, 1)).unwrap();
    let times: Vec<f64> = traj.records.iter().map(|r| r.t).collect();
    // 0, 0.3, 0.6, 0.9 and the final step
    assert_eq!(times.len(), 5);
    assert_eq!(traj.snapshots.len(), 5);
    assert!((times[1] - 0.3).abs() < 1e-15 && (times[4] - 1.0).abs() < 1e-15);
}

#[test]
fn breaking_integral_is_second_order_in_stride() {
    let g = grid(128);
    let u0 = Field::from_fn(&g, |x| 0.5 * (2.0 * PI * x / DEFAULT_LENGTH).sin());
    let integral = |stride: usize| {
        let mut cfg = SimConfig::new(
            g.clone(),
            GeneralCoefficients::camassa_holm(0.0),
            2.0,
            TimeStep::Fixed(0.005),
        );
        cfg.snapshot_stride = stride;
        integrate(&cfg, &u0)
            .unwrap()
            .records
            .last()
            .unwrap()
            .breaking_integral
    };
    let (i1, i2, i4) = (integral(10), integral(20), integral(40));
    let ratio = (i4 - i2) / (i2 - i1);
    assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
}

#[test]
fn breaking_stop_terminates_early() {
    let g = grid(512);
    let a = 2.0;
    let k = 2.0 * PI / DEFAULT_LENGTH;
    let mut cfg = SimConfig::new(
        g.clone(),
        GeneralCoefficients::camassa_holm(0.0),
        4.0,
        TimeStep::Cfl(0.5),
    );
    cfg.breaking_stop = Some(-10.0 * a * k);
    let traj = integrate(&cfg, &Field::from_fn(&g, |x| -a * (k * x).sin())).unwrap();
    assert_eq!(traj.termination, Termination::BreakingDetected);
    assert!(traj.final_time < 4.0);
    let last = traj.records.last().unwrap();
    assert!(last.min_ux <= -10.0 * a * k);
    assert!((traj.snapshots.last().unwrap().0 - traj.final_time).abs() < 1e-15);
}

#[test]
fn wild_step_reports_nonfinite() {
    let g = grid(64);
    let u0 = random_band_limited(&g, 20, 40.0, 2);
    let cfg = SimConfig::new(g.clone(), model(), 50.0, TimeStep::Fixed(1.0));
    let traj = integrate(&cfg, &u0).unwrap();
    assert_eq!(traj.termination, Termination::Nonfinite);
    // the last kept state is still finite
    assert!(traj.final_state().samples().iter().all(|v| v.is_finite()));
}

#[test]
fn config_validation() {
    let g = grid(32);
    let u0 = Field::zeros(&g);
    let base = SimConfig::new(g.clone(), model(), 1.0, TimeStep::Fixed(0.1));
    let mut bad = Vec::new();
    let mut c = base.clone();
    c.t_end = 0.0;
    bad.push(c);
    let mut c = base.clone();
    c.time_step = TimeStep::Cfl(1.5);
    bad.push(c);
    let mut c = base.clone();
    c.time_step = TimeStep::Fixed(-0.1);
    bad.push(c);
    let mut c = base.clone();
    c.snapshot_stride = 0;
    bad.push(c);
    let mut c = base.clone();
    c.breaking_stop = Some(1.0);
    bad.push(c);
    let mut c = base.clone();
    c.coefficients.alpha3 = f64::NAN;
    bad.push(c);
    for c in bad {
        assert!(matches!(integrate(&c, &u0), Err(Error::Config(_))), "{c:?}");
    }
    assert!(integrate(&base, &Field::zeros(&grid(64))).is_err());
}

#[test]
fn step_function_matches_stepper() {
    let g = grid(64);
    let u = random_band_limited(&g, 10, 0.5, 6);
    let a = step_rk4(&u, 0.0, 0.05, &model(), DealiasRule::Strong, None).unwrap();
    let mut b = u.samples().to_vec();
    Stepper::new(&g)
        .step(&mut b, 0.0, 0.05, &model(), DealiasRule::Strong, None)
        .unwrap();
    assert_eq!(a.samples(), &b[..]);
    assert!(step_rk4(&u, 0.0, 0.0, &model(), DealiasRule::None, None).is_err());
}

#[test]
fn manufactured_solution_is_tracked() {
    let g = grid(64);
    let (err, _) = mms_error(
        &ManufacturedSpec::cosine(0.1),
        &model(),
        &g,
        1.0,
        0.01,
        DealiasRule::TwoThirds,
    )
    .unwrap();
    assert!(err < 1e-10, "{err:e}");
    let (zero, _) = mms_error(
        &ManufacturedSpec::cosine(0.0),
        &model(),
        &g,
        1.0,
        0.1,
        DealiasRule::TwoThirds,
    )
    .unwrap();
    assert_eq!(zero, 0.0);
}

#[test]
fn forcing_is_exact_time_derivative_residual() {
    // u* solves u_t = rhs(u) + f: check pointwise at one instant
    let g = grid(64);
    let spec = ManufacturedSpec::von_mises(0.2, 5.0);
    let f = ManufacturedForcing::new(spec, model());
    let t = 0.37;
    let mut out = vec![0.0; g.n()];
    f.eval(t, &g, &mut out);
    let u = spec.exact_field(&g, t);
    let rhs = vortsw::model_forms::rhs_nonlocal(&u, &model());
    for (i, f) in out.iter().enumerate() {
        let ut = spec.exact_t(t, g.x(i), g.length());
        assert!((ut - rhs.samples()[i] - f).abs() < 1e-9, "i={i}");
    }
}

#[test]
fn smooth_runs_show_no_breaking_and_bounded_h1_fit() {
    let g = grid(128);
    let cfg = SimConfig::new(g.clone(), model(), 2.0, TimeStep::Fixed(0.01));
    let traj = integrate(&cfg, &Field::from_fn(&g, sech2)).unwrap();
    let r = breaking_monitor(&traj.records, &BreakingThresholds::default());
    assert_eq!(r.verdict, Verdict::NoBreakingEvidence);
    let h = h1_growth_check(&traj.records);
    assert!(h.finite && h.records_used > 0);
    // the fitted constant really bounds the growth
    let first = traj.records[0].h1;
    for rec in &traj.records[1..] {
        assert!((rec.h1 / first).ln() <= h.c_fit * rec.breaking_integral + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn identical_inputs_identical_records(seed in any::<u64>(), modes in 1u32..8) {
        let g = grid(64);
        let u0 = random_band_limited(&g, modes, 0.3, seed);
        let cfg = SimConfig::new(g.clone(), model(), 0.2, TimeStep::Fixed(0.02));
        let a = integrate(&cfg, &u0).unwrap();
        let b = integrate(&cfg, &u0).unwrap();
        prop_assert_eq!(a.records, b.records);
    }

    #[test]
    fn breaking_integral_never_decreases(seed in any::<u64>()) {
        let g = grid(64);
        let u0 = random_band_limited(&g, 5, 0.5, seed);
        let cfg = SimConfig::new(g.clone(), model(), 0.5, TimeStep::Fixed(0.02));
        let traj = integrate(&cfg, &u0).unwrap();
        for w in traj.records.windows(2) {
            prop_assert!(w[1].breaking_integral >= w[0].breaking_integral);
            prop_assert!(w[1].t > w[0].t);
        }
    }
}
