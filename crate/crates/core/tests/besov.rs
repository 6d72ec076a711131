use std::f64::consts::PI;

use proptest::prelude::*;
use vortsw::besov::{
    besov_norm, block_multiplier, chi, decompose, inequality_suite, lp_norm, phi, q_max,
    BlockNorms, SuiteParams,
};
use vortsw::spectral::{random_band_limited, Field, Grid, DEFAULT_LENGTH};

fn grid(n: usize) -> Grid {
    Grid::new(n, DEFAULT_LENGTH).unwrap()
}

#[test]
fn single_mode_inside_one_annulus() {
    // phi(2^-q k) = 1 exactly for 2^-q k in [4/3, 3/2], so a cosine there has
    // a single block and every B^s_{2,r} norm is 2^{qs} sqrt(L/2)
    for q in 0..4 {
        let k = 1.4 * 2f64.powi(q);
        let length = 2.0 * PI * 10.0 / k;
        let g = Grid::new(256, length).unwrap();
        let u = Field::from_fn(&g, |x| (k * x).cos());
        let b = decompose(&u);
        for (&i, blk) in b.indices.iter().zip(&b.blocks) {
            if i == q {
                assert!(blk.max_abs_diff(&u).unwrap() < 1e-13);
            } else {
                assert!(blk.linf() < 1e-13, "block {i} for q = {q}");
            }
        }
        let want = |s: f64| 2f64.powf(q as f64 * s) * (length / 2.0).sqrt();
        for s in [-0.5, 0.0, 1.5] {
            for r in [1.0, 2.0, f64::INFINITY] {
                let got = besov_norm(&u, s, 2.0, r).unwrap();
                assert!((got - want(s)).abs() < 1e-12 * want(s), "q={q} s={s} r={r}");
            }
        }
    }
}

#[test]
fn constant_sits_in_the_low_block() {
    let g = grid(64);
    let u = Field::from_fn(&g, |_| 3.0);
    // q = -1 carries weight 2^{-s}
    let n = besov_norm(&u, 1.0, 2.0, 2.0).unwrap();
    let want = 0.5 * 3.0 * DEFAULT_LENGTH.sqrt();
    assert!((n - want).abs() < 1e-12 * want);
    let hi_only = BlockNorms::new(&decompose(&u), 2.0)
        .unwrap()
        .combine(1.0, 2.0, false)
        .unwrap();
    assert!(hi_only < 1e-13);
}

#[test]
fn cutoff_shapes() {
    assert_eq!(chi(0.0), 1.0);
    assert_eq!(chi(0.75), 1.0);
    assert_eq!(chi(4.0 / 3.0), 0.0);
    assert_eq!(phi(0.5), 0.0);
    assert_eq!(phi(3.0), 0.0);
    assert_eq!(phi(1.4), 1.0);
    // even in k and monotone on the transition band
    let mut last = 1.0;
    for i in 0..=100 {
        let k = 0.75 + (4.0 / 3.0 - 0.75) * i as f64 / 100.0;
        assert_eq!(chi(k), chi(-k));
        assert!(chi(k) <= last);
        last = chi(k);
    }
}

#[test]
fn q_max_covers_band() {
    assert_eq!(q_max(0.5), 0);
    assert_eq!(q_max(1.0), 0);
    assert_eq!(q_max(5.0), 3);
    assert_eq!(q_max(8.0), 3);
    let g = grid(256);
    assert!(2f64.powi(q_max(g.k_max())) >= g.k_max());
}

#[test]
fn exponents_below_one_are_rejected() {
    let u = random_band_limited(&grid(32), 4, 1.0, 0);
    assert!(besov_norm(&u, 0.0, 0.5, 2.0).is_err());
    assert!(besov_norm(&u, 0.0, 2.0, 0.9).is_err());
    assert!(besov_norm(&u, 0.0, f64::NAN, 2.0).is_err());
    assert!(besov_norm(&u, 0.0, f64::INFINITY, f64::INFINITY).is_ok());
}

#[test]
fn lp_norms_match_direct_sums() {
    let g = grid(64);
    let u = random_band_limited(&g, 8, 1.0, 3);
    assert_eq!(lp_norm(&u, f64::INFINITY), u.linf());
    assert!((lp_norm(&u, 2.0) - u.l2()).abs() < 1e-14 * u.l2());
    let l1: f64 = u.samples().iter().map(|v| v.abs()).sum::<f64>() * g.dx();
    assert!((lp_norm(&u, 1.0) - l1).abs() < 1e-14 * l1);
}

#[test]
fn suite_on_zero_field_is_vacuous() {
    let g = grid(32);
    let r = inequality_suite(&[Field::zeros(&g)], &SuiteParams::default()).unwrap();
    assert!(r.all_pass());
    assert!(r.log_ratio_max.is_finite());
}

fn field_strategy() -> impl Strategy<Value = Field> {
    (any::<u64>(), 1u32..30, 0.1f64..5.0)
        .prop_map(|(seed, m, a)| random_band_limited(&grid(128), m, a, seed))
}

fn r_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(3.5), Just(f64::INFINITY)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_of_unity(k in 0.0f64..500.0) {
        let qm = q_max(500.0);
        let sum: f64 = (-1..=qm).map(|q| block_multiplier(q, k)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn blocks_reconstruct(u in field_strategy()) {
        let back = decompose(&u).reconstruct();
        prop_assert!(back.max_abs_diff(&u).unwrap() < 1e-12 * u.linf().max(1.0));
    }

    #[test]
    fn homogeneous(u in field_strategy(), lam in -4.0f64..4.0, s in -1.0f64..2.0, r in r_strategy()) {
        let a = besov_norm(&u.map(|v| lam * v), s, 2.0, r).unwrap();
        let b = lam.abs() * besov_norm(&u, s, 2.0, r).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }

    #[test]
    fn triangle(u in field_strategy(), v in field_strategy(), s in -1.0f64..2.0, r in r_strategy()) {
        let w = u.zip_with(&v, |a, b| a + b).unwrap();
        let lhs = besov_norm(&w, s, 2.0, r).unwrap();
        let rhs = besov_norm(&u, s, 2.0, r).unwrap() + besov_norm(&v, s, 2.0, r).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn r_nesting(u in field_strategy(), s in -1.0f64..2.0, p in prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY)]) {
        let norms = BlockNorms::new(&decompose(&u), p).unwrap();
        let ladder = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
        for w in ladder.windows(2) {
            let (a, b) = (norms.combine(s, w[0], true).unwrap(), norms.combine(s, w[1], true).unwrap());
            prop_assert!(b <= a * (1.0 + 1e-12));
        }
    }

    #[test]
    fn high_blocks_monotone_in_s(u in field_strategy(), s in -1.0f64..2.0, ds in 0.0f64..1.0, r in r_strategy()) {
        let norms = BlockNorms::new(&decompose(&u), 2.0).unwrap();
        let a = norms.combine(s, r, false).unwrap();
        let b = norms.combine(s + ds, r, false).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12));
    }

    #[test]
    fn suite_passes(seed in any::<u64>()) {
        let fields: Vec<Field> = (0..3).map(|i| random_band_limited(&grid(64), 20, 1.0, seed ^ i)).collect();
        let r = inequality_suite(&fields, &SuiteParams::default()).unwrap();
        prop_assert!(r.all_pass());
        prop_assert!(r.log_ratio_max.is_finite());
    }
}
