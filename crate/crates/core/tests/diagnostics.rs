use logshift::diagnostics::{adjacent_functional_residual, gof_test, w_functional, GofConfig};
use logshift::distributions::Distribution;
use logshift::RngStream;

const LOGISTIC: Distribution = Distribution::STANDARD_LOGISTIC;

fn grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let count = ((hi - lo) / step).round() as usize;
    (0..=count).map(move |i| lo + step * i as f64)
}

#[test]
fn w_is_one_for_logistic() {
    let worst = grid(-8.0, 8.0, 0.01)
        .map(|x| (w_functional(&LOGISTIC, x).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn w_differs_off_logistic() {
    let normal = Distribution::variance_matched_normal();
    let w0 = w_functional(&normal, 0.0).unwrap();
    let sigma = std::f64::consts::PI / 3f64.sqrt();
    let want = 4.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    assert!((w0 - want).abs() < 1e-12);
    assert!((w0 - 1.0).abs() > 0.05);
    let shifted = Distribution::logistic(1.0).unwrap();
    assert!((w_functional(&shifted, 1.0).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn residual_vanishes_for_logistic() {
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for k in 1..n {
            for x in grid(-6.0, 6.0, 0.05) {
                worst = worst.max(
                    adjacent_functional_residual(&LOGISTIC, n, k, x)
                        .unwrap()
                        .abs(),
                );
            }
        }
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn residual_nonzero_off_logistic() {
    let r =
        adjacent_functional_residual(&Distribution::variance_matched_normal(), 4, 2, 0.0).unwrap();
    assert!(r.abs() > 1e-3);
    let u = adjacent_functional_residual(&Distribution::Uniform01, 3, 1, 0.4).unwrap();
    assert!(u.abs() > 1e-3);
    assert_eq!(
        adjacent_functional_residual(&Distribution::Uniform01, 3, 1, -0.5).unwrap(),
        0.0
    );
}

#[test]
fn exact_quantile_data_is_not_rejected() {
    let n = 10_000;
    let data: Vec<f64> = (1..=n)
        .map(|i| {
            let p = i as f64 / (n + 1) as f64;
            LOGISTIC.quantile(p).unwrap()
        })
        .collect();
    for seed in 0..3 {
        let config = GofConfig {
            seed,
            ..Default::default()
        };
        let res = gof_test(&data, &config).unwrap();
        assert!(res.p_value >= 0.05, "seed {seed}: {res:?}");
        assert_eq!(res.sample_size, n);
    }
}

#[test]
fn variance_matched_normal_is_rejected() {
    let data = Distribution::variance_matched_normal().sample(&mut RngStream::new(404), 10_000);
    let res = gof_test(&data, &GofConfig::default()).unwrap();
    assert!(res.p_value <= 0.05, "{res:?}");
    assert_eq!(res.p_value, 1.0 / 200.0);
}

#[test]
fn location_shift_and_centering() {
    // the shift identity holds for a logistic law at any location
    let base = LOGISTIC.sample(&mut RngStream::new(5), 5_000);
    let moved: Vec<f64> = base.iter().map(|x| x + 3.0).collect();
    let plain = gof_test(&base, &GofConfig::default()).unwrap();
    let raw = gof_test(&moved, &GofConfig::default()).unwrap();
    assert!((raw.statistic - plain.statistic).abs() < 1e-12);
    let centered = GofConfig {
        center_median: true,
        ..Default::default()
    };
    let res = gof_test(&moved, &centered).unwrap();
    assert!(res.centered);
    assert!(res.p_value > 0.01, "{res:?}");
}

#[test]
fn other_ranks_are_supported() {
    let data = LOGISTIC.sample(&mut RngStream::new(6), 2_000);
    let config = GofConfig {
        n: 5,
        k: 3,
        ..Default::default()
    };
    let res = gof_test(&data, &config).unwrap();
    assert_eq!(res.identity_used, "lemma1ii:k=3,n=5");
    assert!(res.p_value > 0.0 && res.p_value <= 1.0);
}
