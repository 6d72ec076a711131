use num_rational::BigRational;
use proptest::prelude::*;
use vortsw::coeffs::exact::{at_speed, rational, to_f64};
use vortsw::coeffs::{
    burns_speed, derived_intermediates, derived_intermediates_at_height, identity_suite,
    identity_suite_for, model_coefficients, normalize, GeneralCoefficients,
};
use vortsw::Error;

// Frozen from an independent Fraction evaluation of the closed forms.
struct Pinned {
    c: (i64, i64),
    a: (i64, i64),
    alpha: (i64, i64),
    beta: (i64, i64),
    beta0: (i64, i64),
    b16: (i64, i64),
    remark: (i64, i64),
}

const PINNED: [Pinned; 2] = [
    Pinned {
        c: (3, 1),
        a: (8, 3),
        alpha: (91, 30),
        beta: (69, 9100),
        beta0: (953, 81900),
        b16: (-23, 500),
        remark: (227, 4500),
    },
    Pinned {
        c: (3, 2),
        a: (5, 6),
        alpha: (133, 156),
        beta: (2760, 22477),
        beta0: (23428, 202293),
        b16: (-460, 2197),
        remark: (5596, 19773),
    },
];

fn r(p: (i64, i64)) -> BigRational {
    rational(p.0, p.1)
}

#[test]
fn exact_values_at_rational_speeds() {
    for p in &PINNED {
        let f = at_speed(&r(p.c));
        assert_eq!(f.vorticity, r(p.a));
        assert_eq!(f.alpha, r(p.alpha));
        assert_eq!(f.beta, r(p.beta));
        assert_eq!(f.beta0, r(p.beta0));
        assert_eq!(f.b[15], r(p.b16));
        assert_eq!(f.b[15], f.b[16].clone() * rational(2, 1));
        let two = rational(2, 1);
        assert_eq!(two.clone() * &f.c8 + two * &f.c9 - &f.c10, r(p.remark));
    }
}

#[test]
fn double_path_tracks_exact_path() {
    for p in &PINNED {
        let f = at_speed(&r(p.c));
        let a = to_f64(&f.vorticity);
        let m = model_coefficients(a).unwrap();
        let d = derived_intermediates(a).unwrap();
        let close = |x: f64, y: &BigRational| {
            let y = to_f64(y);
            assert!((x - y).abs() <= 1e-13 * y.abs().max(1e-300), "{x} vs {y}");
        };
        close(m.c, &f.c);
        close(m.alpha, &f.alpha);
        close(m.beta, &f.beta);
        close(m.beta0, &f.beta0);
        for (w, e) in m.omegas().iter().zip(&f.omega) {
            // omegas can sit near zero, so compare on an absolute scale too
            let e = to_f64(e);
            assert!((w - e).abs() <= 1e-12 * e.abs().max(1.0), "{w} vs {e}");
        }
        for i in 1..=18 {
            let e = to_f64(&f.b[i - 1]);
            let got = d.b(i).unwrap();
            assert!(
                (got - e).abs() <= 1e-12 * e.abs().max(1.0),
                "B{i}: {got} vs {e}"
            );
        }
        close(m.z0 * m.z0, &f.z0_sq);
    }
}

#[test]
fn b19_b20_are_unavailable() {
    let d = derived_intermediates(1.5).unwrap();
    assert!(d.b(18).is_some());
    assert!(d.b(19).is_none());
    assert!(d.b(20).is_none());
    assert!(d.b(0).is_none());
    assert!(d.a(11).is_none());
}

#[test]
fn bad_vorticity_is_rejected() {
    for a in [-1e-9, -3.0, f64::NAN, f64::INFINITY] {
        assert!(
            matches!(model_coefficients(a), Err(Error::InvalidVorticity(_))),
            "{a}"
        );
        assert!(identity_suite(a).is_err());
    }
}

#[test]
fn height_must_be_finite() {
    assert!(derived_intermediates_at_height(1.5, Some(f64::NAN)).is_err());
    let at_z0 = derived_intermediates(1.5).unwrap();
    let same = derived_intermediates_at_height(1.5, Some(at_z0.z)).unwrap();
    for i in 1..=18 {
        let (x, y) = (at_z0.b(i).unwrap(), same.b(i).unwrap());
        assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0), "B{i}");
    }
}

#[test]
fn normalized_form_has_fixed_entries() {
    let g = normalize(&model_coefficients(1.5).unwrap()).unwrap();
    assert_eq!(g.alpha2, 1.0);
    assert_eq!(g.beta2, -1.0);
    assert_eq!(g.beta7, -0.5);
    // beta0 / beta at c = 2
    assert!((g.alpha1 - (17.0 / 350.0) / (43.0 / 1050.0)).abs() < 1e-14);
    assert!((g.beta1 - (g.alpha1 - 2.0)).abs() < 1e-15);
}

#[test]
fn special_coefficient_sets() {
    let ch = GeneralCoefficients::camassa_holm(0.7);
    assert_eq!(ch.alpha1, 0.7);
    assert_eq!(ch.polynomial_flux(), [0.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
    let adv = GeneralCoefficients::advection(2.0);
    assert_eq!(adv.alpha1, 2.0);
    assert_eq!(adv.alpha2, 0.0);
    assert!(adv.is_finite());
}

#[test]
fn fault_is_detected_and_named() {
    let mut m = model_coefficients(0.3).unwrap();
    let d = derived_intermediates(0.3).unwrap();
    m.alpha *= 1.0 + 1e-8;
    let r = identity_suite_for(&m, &d);
    assert!(!r.all_pass());
    assert!(r.failures().any(|c| c.name == "three_alpha_closed_form"));
}

proptest! {
    #[test]
    fn identities_hold_everywhere(log_a in -3.0f64..1.0) {
        let a = 10f64.powf(log_a);
        let r = identity_suite(a).unwrap();
        prop_assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn burns_root_is_right_going(a in 0.0f64..50.0) {
        let c = burns_speed(a).unwrap();
        prop_assert!(c >= 1.0);
        prop_assert!((c * c - a * c - 1.0).abs() <= 1e-12 * (c * c).max(1.0));
        // larger vorticity, faster wave
        prop_assert!(burns_speed(a + 0.1).unwrap() > c);
    }

    #[test]
    fn coefficients_positive(a in 0.0f64..20.0) {
        let m = model_coefficients(a).unwrap();
        prop_assert!(m.alpha > 0.0 && m.beta > 0.0);
        prop_assert!((0.0..=1.0).contains(&m.z0));
    }
}
