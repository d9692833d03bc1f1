use logshift::cf::uniform_points;
use logshift::distributions::{Distribution, OrderStatistic};
use logshift::identity::{
    catalog, exact_cf_side, parse_selector, sample_side, sample_side_chunked, sample_side_with,
    verify, FamilyParams, IdentitySpec, LaplaceSampling, ShiftExpression, Verdict,
    VerificationConfig, VerificationReport,
};
use logshift::special::logistic_cf;
use logshift::two_sample::{ks_test_sorted, sort_sample, TwoSampleTest};
use logshift::RngStream;

const LOGISTIC: Distribution = Distribution::STANDARD_LOGISTIC;

fn sides_ks(id: &IdentitySpec, seed: u64, count: usize) -> f64 {
    let rng = RngStream::new(seed);
    let mut a = sample_side(&id.lhs, &rng.split(1), count);
    let mut b = sample_side(&id.rhs, &rng.split(2), count);
    sort_sample(&mut a);
    sort_sample(&mut b);
    ks_test_sorted(&a, &b).p_value
}

#[test]
fn catalog_cf_sides_agree() {
    let grid = uniform_points(-5.0, 5.0, 41).unwrap();
    let ids = catalog(6);
    assert_eq!(ids.len(), 31 + 35 + 21 + 2 + 6);
    for id in &ids {
        let worst = grid
            .iter()
            .map(|&t| {
                (exact_cf_side(&id.lhs, t).unwrap() - exact_cf_side(&id.rhs, t).unwrap()).norm()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-12, "{}: {worst:e}", id.label);
    }
}

#[test]
fn exact_cf_side_examples() {
    let single = ShiftExpression::order_statistic(LOGISTIC, 1, 1).unwrap();
    for t in [-2.0, 0.0, 1.5] {
        assert_eq!(exact_cf_side(&single, t).unwrap(), logistic_cf(t));
    }
    let l = IdentitySpec::new(FamilyParams::Lemma1i { k: 1, m: 2, n: 2 }).unwrap();
    assert!(
        (exact_cf_side(&l.lhs, 1.0).unwrap() - exact_cf_side(&l.rhs, 1.0).unwrap()).norm() <= 1e-14
    );
    let ii = IdentitySpec::new(FamilyParams::Lemma1ii { k: 2, n: 3 }).unwrap();
    let x = ShiftExpression::parent(LOGISTIC);
    for t in [0.5, 1.0, 2.0] {
        assert!((exact_cf_side(&ii.rhs, t).unwrap() - logistic_cf(t)).norm() <= 1e-13);
        assert!((exact_cf_side(&x, t).unwrap() - logistic_cf(t)).norm() <= 1e-13);
    }
}

#[test]
fn zero_shift_side_matches_order_statistic_sampler() {
    let spec = OrderStatistic::new(LOGISTIC, 4, 3).unwrap();
    let expr = ShiftExpression::order_statistic(LOGISTIC, 4, 3).unwrap();
    let rng = RngStream::new(9);
    let a = sample_side(&expr, &rng, 1000);
    assert_eq!(a, spec.sample(&mut rng.split(0), 1000));
}

#[test]
fn max_of_exponentials_matches_harmonic_sum() {
    let id = IdentitySpec::new(FamilyParams::MaxExp { n: 4 }).unwrap();
    assert!(sides_ks(&id, 11, 100_000) >= 0.01);
}

#[test]
fn theorem1_single_k_r2_sides_agree() {
    let id = IdentitySpec::new(FamilyParams::Theorem1 { r: 2, k: 1, n: 4 }).unwrap();
    assert!(sides_ks(&id, 12, 100_000) >= 0.01);
}

#[test]
fn laplace_sampling_routes_agree() {
    for k in [2, 3] {
        let id = IdentitySpec::new(FamilyParams::Median { k }).unwrap();
        let rng = RngStream::new(20 + k as u64);
        let mut a = sample_side_with(&id.rhs, &rng.split(1), 100_000, LaplaceSampling::Direct);
        let mut b = sample_side_with(
            &id.rhs,
            &rng.split(2),
            100_000,
            LaplaceSampling::ExponentialDifference,
        );
        sort_sample(&mut a);
        sort_sample(&mut b);
        assert!(ks_test_sorted(&a, &b).p_value >= 0.01, "k={k}");
    }
}

#[test]
fn chunked_sampling_ignores_thread_count() {
    let id = IdentitySpec::new(FamilyParams::Lemma1ii { k: 2, n: 5 }).unwrap();
    let rng = RngStream::new(3);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_side_chunked(&id.rhs, &rng, 200_000))
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn lemma1i_example_is_consistent() {
    let id = parse_selector("lemma1i:k=2,m=4,n=5")
        .unwrap()
        .identities
        .remove(0);
    let config = VerificationConfig {
        seed: 42,
        ..Default::default()
    };
    let report = verify(&id, &config).unwrap();
    assert_eq!(report.verdict, Verdict::Consistent, "{}", report.summary());
    assert!(report.cf_max_abs_diff.unwrap() <= 1e-12);
    assert_eq!(report.cf_grid_points, 41);
}

#[test]
fn normal_parent_is_rejected() {
    let id = IdentitySpec::with_parent(
        FamilyParams::Theorem1 { r: 1, k: 1, n: 3 },
        Distribution::variance_matched_normal(),
    )
    .unwrap();
    let report = verify(&id, &VerificationConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Rejected);
    assert!(report.ks_p_value < 0.01);
    assert!(report.cf_max_abs_diff.is_none());
}

#[test]
fn identical_sides_are_consistent_and_converge() {
    let side = ShiftExpression::order_statistic(LOGISTIC, 3, 2).unwrap();
    let mut id = IdentitySpec::new(FamilyParams::Lemma1ii { k: 2, n: 3 }).unwrap();
    id.lhs = side.clone();
    id.rhs = side;
    let stat = |n| {
        let config = VerificationConfig {
            sample_size: n,
            seed: 5,
            ..Default::default()
        };
        let r = verify(&id, &config).unwrap();
        assert_eq!(r.cf_max_abs_diff, Some(0.0));
        (r.verdict, r.ks_statistic)
    };
    let (v1, d1) = stat(10_000);
    let (v2, d2) = stat(1_000_000);
    assert_eq!(v1, Verdict::Consistent);
    assert_eq!(v2, Verdict::Consistent);
    assert!(d2 < d1);
}

#[test]
fn report_is_deterministic_and_round_trips() {
    let id = IdentitySpec::new(FamilyParams::Median { k: 3 }).unwrap();
    let config = VerificationConfig {
        sample_size: 50_000,
        seed: 77,
        test: TwoSampleTest::Cvm,
        ..Default::default()
    };
    let a = verify(&id, &config).unwrap();
    let b = verify(&id, &config).unwrap();
    assert_eq!(a, b);
    let ja = serde_json::to_string(&a).unwrap();
    assert_eq!(ja, serde_json::to_string(&b).unwrap());
    let back: VerificationReport = serde_json::from_str(&ja).unwrap();
    assert_eq!(back, a);
    assert!(a.cvm_p_value.is_some());
}

#[test]
fn small_samples_are_refused() {
    let id = IdentitySpec::new(FamilyParams::MaxExp { n: 3 }).unwrap();
    let config = VerificationConfig {
        sample_size: 9_999,
        ..Default::default()
    };
    assert!(verify(&id, &config).is_err());
}

#[test]
fn selectors() {
    let full = parse_selector("theorem1:r=2,k1=1,k2=2,n=5").unwrap();
    assert!(full.characterization_level);
    assert_eq!(full.identities.len(), 2);
    let single = parse_selector("theorem1:r=2,k1=1,n=5").unwrap();
    assert!(!single.characterization_level);
    assert!(parse_selector("theorem1:r=2,k1=1,k2=1,n=5").is_err());
    assert!(parse_selector("theorem1:r=3,k1=1,n=3").is_err());
    for s in [
        "lemma1i:k=2,m=4,n=5",
        "lemma1ii:k=3,n=5",
        "median:k=3",
        "maxexp:n=6",
    ] {
        let sel = parse_selector(s).unwrap();
        assert_eq!(sel.identities[0].label, s);
    }
    assert!(parse_selector("median:k=1").is_err());
    assert!(parse_selector("lemma1i:k=4,m=4,n=5").is_err());
    assert!(parse_selector("bogus:n=3").is_err());
}
