use super::*;
use alloc::vec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn pool(pairs: &[(f64, f64)]) -> ResultPool {
    ResultPool::new(
        pairs.iter().map(|&(v, t)| RunRecord::new(v, t)).collect(),
        Direction::Maximize,
    )
    .unwrap()
}

/// Exhaustive expectation over all m^n with-replacement draws: pick the
/// best-validation drawn record, average the test scores of drawn records tied at
/// that validation.
fn enumerate_boon(records: &[RunRecord], direction: Direction, n: u32) -> f64 {
    let m = records.len();
    let total = m.pow(n);
    let sign = direction.sign();
    let mut acc = 0.0;
    for code in 0..total {
        let mut c = code;
        let mut drawn = vec![];
        for _ in 0..n {
            drawn.push(records[c % m]);
            c /= m;
        }
        let best = drawn
            .iter()
            .map(|r| sign * r.validation)
            .fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<f64> = drawn
            .iter()
            .filter(|r| sign * r.validation == best)
            .map(|r| r.test)
            .collect();
        acc += tied.iter().sum::<f64>() / tied.len() as f64;
    }
    acc / total as f64
}

#[test]
fn n_one_is_test_mean() {
    let p = pool(&[(0.3, 5.0), (0.1, 2.0), (0.9, -1.0), (0.2, 8.5)]);
    let e = boon_nonparametric(&p, 1).unwrap();
    assert!((e.value - 14.5 / 4.0).abs() < 1e-12);
    assert_eq!(e.kind, EstimatorKind::Nonparametric);
    assert_eq!((e.n, e.m), (1, 4));
}

#[test]
fn toy_pool_brute_force_value() {
    let p = pool(&[(0.1, 10.0), (0.2, 20.0), (0.3, 30.0)]);
    assert!((boon_nonparametric(&p, 2).unwrap().value - 220.0 / 9.0).abs() < 1e-12);
}

#[test]
fn all_tied_validation_gives_test_mean() {
    let p = pool(&[(0.5, 5.0), (0.5, 7.0), (0.5, 9.0)]);
    for n in [1, 2, 5, 50] {
        assert!((boon_nonparametric(&p, n).unwrap().value - 7.0).abs() < 1e-12);
    }
}

#[test]
fn single_record_pool() {
    let p = pool(&[(0.4, 61.3)]);
    for n in [1, 5, 20] {
        let e = boon_nonparametric(&p, n).unwrap();
        assert_eq!(e.value, 61.3);
        assert_eq!(e.extrapolative, n > 1);
    }
}

#[test]
fn invalid_inputs() {
    assert!(matches!(
        ResultPool::new(vec![], Direction::Maximize),
        Err(Error::InvalidArgument(_))
    ));
    let bad = ResultPool::new(
        vec![RunRecord::new(0.1, 1.0), RunRecord::new(0.2, f64::NAN)],
        Direction::Maximize,
    );
    assert_eq!(
        bad.unwrap_err(),
        Error::InvalidData {
            index: 1,
            axis: Axis::Test
        }
    );
    let p = pool(&[(0.1, 1.0)]);
    assert!(boon_nonparametric(&p, 0).is_err());
}

#[test]
fn minimize_prefers_low_validation() {
    let p = ResultPool::new(
        vec![
            RunRecord::new(0.1, 10.0),
            RunRecord::new(0.2, 20.0),
            RunRecord::new(0.3, 30.0),
        ],
        Direction::Minimize,
    )
    .unwrap();
    // best (lowest) validation carries the largest weight 5/9
    let expected = (5.0 * 10.0 + 3.0 * 20.0 + 1.0 * 30.0) / 9.0;
    assert!((boon_nonparametric(&p, 2).unwrap().value - expected).abs() < 1e-12);
}

#[test]
fn parametric_degenerate_axes() {
    let flat_test = pool(&[(0.1, 3.0), (0.2, 3.0), (0.3, 3.0), (0.4, 3.0)]);
    assert_eq!(
        boon_parametric_gaussian(&flat_test, 5).unwrap_err(),
        Error::DegeneratePool { axis: Axis::Test }
    );
    let flat_val = pool(&[(0.1, 3.0), (0.1, 4.0), (0.1, 5.0)]);
    assert_eq!(
        boon_parametric_gaussian(&flat_val, 5).unwrap_err(),
        Error::DegeneratePool {
            axis: Axis::Validation
        }
    );
    let small = pool(&[(0.1, 3.0), (0.2, 4.0)]);
    assert_eq!(
        boon_parametric_gaussian(&small, 5).unwrap_err(),
        Error::InsufficientData { needed: 3, got: 2 }
    );
}

#[test]
fn parametric_n_one_is_mean() {
    let p = pool(&[(0.1, 3.0), (0.5, 4.0), (0.3, 8.0), (0.2, 1.0)]);
    let e = boon_parametric_gaussian(&p, 1).unwrap();
    assert!((e.value - 4.0).abs() < 1e-9);
    assert_eq!(e.kind, EstimatorKind::GaussianParametric);
}

#[test]
fn parametric_converges_to_closed_form() {
    let params = GaussianParams::new(0.0, 63.16, 1.0, 0.94, 0.18).unwrap();
    let truth = crate::gaussian_boon_valtest(&params, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let records: Vec<RunRecord> = (0..10_000)
        .map(|_| {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let t = 63.16 + 0.94 * (0.18 * z1 + (1.0f64 - 0.0324).sqrt() * z2);
            RunRecord::new(z1, t)
        })
        .collect();
    let p = ResultPool::new(records, Direction::Maximize).unwrap();
    let e = boon_parametric_gaussian(&p, 5).unwrap();
    assert!((e.value - truth).abs() < 0.05, "{} vs {truth}", e.value);
}

#[test]
fn summary_examples() {
    let p = pool(&[(0.1, 1.0), (0.2, 2.0), (0.3, 3.0), (0.4, 4.0)]);
    let s = summarize(&p);
    assert_eq!(s.m, 4);
    assert_eq!(s.mean_test, 2.5);
    assert_eq!(s.range_test, (1.0, 4.0));
    assert_eq!(s.iqr_test, Some(1.5));
    assert!((s.spearman_val_test.unwrap() - 1.0).abs() < 1e-15);
    assert!((s.pearson_val_test.unwrap() - 1.0).abs() < 1e-15);

    let tests = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
    let p = pool(
        &tests
            .iter()
            .enumerate()
            .map(|(i, &t)| (i as f64, t))
            .collect::<Vec<_>>(),
    );
    assert!((summarize(&p).std_test.unwrap() - 2.138).abs() < 1e-3);
}

#[test]
fn summary_absent_statistics_for_tiny_pools() {
    let s = summarize(&pool(&[(0.1, 1.0)]));
    assert_eq!(
        (s.std_test, s.iqr_test, s.spearman_val_test),
        (None, None, None)
    );
    let s = summarize(&pool(&[(0.1, 1.0), (0.2, 3.0)]));
    assert!(s.std_test.is_some());
    assert_eq!(s.pearson_val_test, None);
}

#[test]
fn anderson_darling_reference_values() {
    // reference: scipy.stats.anderson(x, 'norm').statistic
    let x = [0.1, 0.25, 0.33, 0.41, 0.5, 0.52, 0.61, 0.77, 0.8, 0.95, 1.3];
    let ad = anderson_darling_normality(&x).unwrap();
    assert!((ad.statistic - 0.183_215_289_815_800_38).abs() < 1e-10);
    let x = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
    let ad = anderson_darling_normality(&x).unwrap();
    assert!((ad.statistic - 0.432_270_139_714_084_7).abs() < 1e-10);
    assert!(!ad.reject_at_5pct);
}

#[test]
fn anderson_darling_errors() {
    assert!(matches!(
        anderson_darling_normality(&[1.0; 20]),
        Err(Error::InsufficientData { .. })
    ));
    assert!(matches!(
        anderson_darling_normality(&[1.0, 2.0, 3.0]),
        Err(Error::InsufficientData { .. })
    ));
}

#[test]
fn anderson_darling_calibration_and_power() {
    let mut accepted = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..1000).map(|_| rng.sample(StandardNormal)).collect();
        if !anderson_darling_normality(&xs).unwrap().reject_at_5pct {
            accepted += 1;
        }
    }
    assert!(accepted >= 188, "accepted {accepted} of 200");

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let xs: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
    assert!(anderson_darling_normality(&xs).unwrap().reject_at_5pct);
}

fn records_strategy(max_m: usize) -> impl Strategy<Value = Vec<RunRecord>> {
    // small integer grid so validation ties are common
    prop::collection::vec((0i32..4, -20i32..20), 1..=max_m).prop_map(|v| {
        v.into_iter()
            .map(|(a, b)| RunRecord::new(a as f64 * 0.1, b as f64 * 0.5))
            .collect()
    })
}

fn direction_strategy() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Maximize), Just(Direction::Minimize)]
}

proptest! {
    #[test]
    fn matches_enumeration(records in records_strategy(6), n in 1u32..=4, dir in direction_strategy()) {
        let p = ResultPool::new(records.clone(), dir).unwrap();
        let fast = boon_nonparametric(&p, n).unwrap().value;
        prop_assert!((fast - enumerate_boon(&records, dir, n)).abs() <= 1e-10);
    }

    #[test]
    fn n_one_mean_and_convexity(records in records_strategy(30), n in 1u32..200) {
        let p = ResultPool::new(records.clone(), Direction::Maximize).unwrap();
        let tests = p.tests();
        let mean = tests.iter().sum::<f64>() / tests.len() as f64;
        prop_assert!((boon_nonparametric(&p, 1).unwrap().value - mean).abs() < 1e-12);
        let v = boon_nonparametric(&p, n).unwrap().value;
        let lo = tests.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tests.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn permutation_invariant(records in records_strategy(20), n in 1u32..10, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = records.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = ResultPool::new(records, Direction::Maximize).unwrap();
        let b = ResultPool::new(shuffled, Direction::Maximize).unwrap();
        prop_assert_eq!(boon_nonparametric(&a, n).unwrap().value, boon_nonparametric(&b, n).unwrap().value);
        if let (Ok(x), Ok(y)) = (boon_parametric_gaussian(&a, n), boon_parametric_gaussian(&b, n)) {
            prop_assert!((x.value - y.value).abs() < 1e-9);
        }
    }

    #[test]
    fn affine_in_test_scores(records in records_strategy(20), n in 1u32..10, a in 0.1f64..10.0, b in -50.0f64..50.0) {
        let mapped: Vec<RunRecord> = records.iter().map(|r| RunRecord::new(r.validation, a * r.test + b)).collect();
        let p = ResultPool::new(records, Direction::Maximize).unwrap();
        let q = ResultPool::new(mapped, Direction::Maximize).unwrap();
        let base = boon_nonparametric(&p, n).unwrap().value;
        prop_assert!((boon_nonparametric(&q, n).unwrap().value - (a * base + b)).abs() < 1e-9);
        if let Ok(x) = boon_parametric_gaussian(&p, n) {
            let y = boon_parametric_gaussian(&q, n).unwrap();
            prop_assert!((y.value - (a * x.value + b)).abs() < 1e-9);
        }
    }

    #[test]
    fn direction_duality(records in records_strategy(20), n in 1u32..10) {
        let negated: Vec<RunRecord> = records.iter().map(|r| RunRecord::new(-r.validation, -r.test)).collect();
        let min = ResultPool::new(records, Direction::Minimize).unwrap();
        let max = ResultPool::new(negated, Direction::Maximize).unwrap();
        prop_assert_eq!(boon_nonparametric(&min, n).unwrap().value, -boon_nonparametric(&max, n).unwrap().value);
        if let Ok(x) = boon_parametric_gaussian(&min, n) {
            let y = boon_parametric_gaussian(&max, n).unwrap();
            prop_assert!((x.value + y.value).abs() < 1e-9);
        }
    }

    #[test]
    fn single_evaluation_monotone_in_n(scores in prop::collection::vec(-100i32..100, 1..25), n in 1u32..30) {
        let scores: Vec<f64> = scores.into_iter().map(f64::from).collect();
        let p = ResultPool::single_evaluation(&scores, Direction::Maximize).unwrap();
        let now = boon_nonparametric(&p, n).unwrap().value;
        let next = boon_nonparametric(&p, n + 1).unwrap().value;
        prop_assert!(next >= now - 1e-12);
    }
}
