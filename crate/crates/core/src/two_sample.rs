//! Two-sample goodness-of-fit statistics: Kolmogorov–Smirnov and
//! Cramér–von Mises, with asymptotic p-values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quadrature;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoSampleTest {
    #[default]
    Ks,
    Cvm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

pub fn sort_sample(xs: &mut [f64]) {
    xs.sort_unstable_by(f64::total_cmp);
}

/// Sup distance between the empirical CDFs of two sorted samples.
pub fn ks_statistic_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Kolmogorov survival function `P(K > lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-transformed series converges fast for small lambda
        let c = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=6)
            .map(|j| {
                let odd = (2 * j - 1) as f64;
                (-odd * odd * c).exp()
            })
            .sum();
        return unit_interval(1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s);
    }
    let s: f64 = (1..=100)
        .map(|j| {
            let jf = j as f64;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * jf * jf * lambda * lambda).exp()
        })
        .take_while(|t| t.abs() > 0.0)
        .sum();
    unit_interval(2.0 * s)
}

/// Clamps to [0, 1], mapping -0.0 to 0.0.
fn unit_interval(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p.min(1.0)
    }
}

/// Two-sample KS test on sorted samples; p-value from the Kolmogorov limit
/// with Stephens' small-sample correction.
pub fn ks_test_sorted(a: &[f64], b: &[f64]) -> TestOutcome {
    let d = ks_statistic_sorted(a, b);
    let en = (a.len() as f64 * b.len() as f64 / (a.len() + b.len()) as f64).sqrt();
    TestOutcome {
        statistic: d,
        p_value: kolmogorov_sf((en + 0.12 + 0.11 / en) * d),
    }
}

/// Two-sample Cramér–von Mises criterion T (Anderson 1962) on sorted samples.
pub fn cvm_statistic_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let (mut ua, mut ub) = (0.0f64, 0.0f64);
    // ranks in the pooled sample; ties share the lower rank order of arrival
    while i < n || j < m {
        let take_a = j >= m || (i < n && a[i] <= b[j]);
        let rank = (i + j + 1) as f64;
        if take_a {
            i += 1;
            ua += (rank - i as f64).powi(2);
        } else {
            j += 1;
            ub += (rank - j as f64).powi(2);
        }
    }
    let (nf, mf) = (n as f64, m as f64);
    let u = nf * ua + mf * ub;
    u / (nf * mf * (nf + mf)) - (4.0 * nf * mf - 1.0) / (6.0 * (nf + mf))
}

/// `e^q K_{1/4}(q)`, computed as `int_0^inf exp(-q (cosh s - 1)) cosh(s/4) ds`.
fn scaled_bessel_k_quarter(q: f64) -> f64 {
    // integrand < e^-40 beyond cosh s - 1 = 40 / q
    let upper = (1.0 + 40.0 / q).acosh() + 1.0;
    quadrature::integrate(
        |s| Complex64::new((-q * (s.cosh() - 1.0)).exp() * (0.25 * s).cosh(), 0.0),
        0.0,
        upper,
        &[],
        1e-12,
        2000,
    )
    .map(|r| r.value.re)
    .unwrap_or(f64::NAN)
}

/// Limiting CDF of the Cramér–von Mises statistic.
pub fn cvm_limit_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x > 10.0 {
        return 1.0;
    }
    let pi = std::f64::consts::PI;
    let mut ratio = pi.sqrt(); // Gamma(k + 1/2) / Gamma(k + 1) at k = 0
    let mut total = 0.0;
    for k in 0..200 {
        let y = (4 * k + 1) as f64;
        let q = y * y / (16.0 * x);
        let term = if q > 700.0 {
            0.0
        } else {
            ratio / (pi.powf(1.5) * x.sqrt())
                * y.sqrt()
                * scaled_bessel_k_quarter(q)
                * (-2.0 * q).exp()
        };
        total += term;
        if term.abs() < 1e-12 {
            break;
        }
        ratio *= (k as f64 + 0.5) / (k as f64 + 1.0);
    }
    unit_interval(total)
}

/// Two-sample CvM test; T is standardized by its exact finite-sample mean and
/// variance before referring it to the limiting law.
pub fn cvm_test_sorted(a: &[f64], b: &[f64]) -> TestOutcome {
    let t = cvm_statistic_sorted(a, b);
    let (nx, ny) = (a.len() as f64, b.len() as f64);
    let (k, n) = (nx * ny, nx + ny);
    let mean = (1.0 + 1.0 / n) / 6.0;
    let var =
        (n + 1.0) * (4.0 * k * n - 3.0 * (nx * nx + ny * ny) - 2.0 * k) / (45.0 * n * n * 4.0 * k);
    let standardized = 1.0 / 6.0 + (t - mean) / (45.0 * var).sqrt();
    let p_value = if standardized < 0.003 {
        1.0
    } else {
        unit_interval(1.0 - cvm_limit_cdf(standardized))
    };
    TestOutcome {
        statistic: t,
        p_value,
    }
}
