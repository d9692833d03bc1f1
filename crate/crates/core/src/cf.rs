//! Characteristic functions of order statistics.
//!
//! For the standard logistic parent the CF of `X_{k,n}` is
//! `Gamma(k+it) Gamma(n-k+1-it) / (Gamma(k) Gamma(n-k+1))`, which for integer
//! ranks collapses to linear factors times the parent CF:
//!
//! ```text
//! phi_k(t) = prod_{j=1}^{k-1} (1 + it/j) * prod_{j=1}^{n-k} (1 - it/j) * pi t / sinh(pi t)
//! ```
//!
//! Quadrature of `e^{itx} f_{k,n}(x)` is kept as an independent route for
//! arbitrary parents, and derivatives of the order-statistic CDF are recovered
//! from a sampled CF by the inversion integral.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::distributions::{Distribution, OrderStatistic};
use crate::error::{domain, Error, Result};
use crate::quadrature;
use crate::special::{complex_gamma, exponential_cf, logistic_cf, ComplexValue};

/// Default t spacing of inversion grids; resolves `e^{-itx}` for |x| up to ~10.
pub const DEFAULT_INVERSION_SPACING: f64 = 0.05;

/// Maximum CDF derivative order supported by [`cf_invert_derivative`].
pub const MAX_DERIVATIVE_ORDER: u32 = 4;

const INVERSION_TAIL_LIMIT: f64 = 1e-10;
const INVERSION_DECAY_TARGET: f64 = 1e-13;
const QUADRATURE_MAX_INTERVALS: usize = 4000;

fn check_rank(n: u32, k: u32) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(domain(format!("rank k={k} outside [1, n={n}]")));
    }
    Ok(())
}

/// CF of the k-th of n standard logistic order statistics via the linear-factor product.
pub fn logistic_order_stat_cf(n: u32, k: u32, t: f64) -> Result<ComplexValue> {
    check_rank(n, k)?;
    let up = (1..k).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * Complex64::new(1.0, t / j as f64)
    });
    let down = (1..=n - k).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * Complex64::new(1.0, -t / j as f64)
    });
    Ok(up * down * logistic_cf(t))
}

/// The same CF evaluated through complex gamma calls; used only as a cross-check.
pub fn logistic_order_stat_cf_gamma(n: u32, k: u32, t: f64) -> Result<ComplexValue> {
    check_rank(n, k)?;
    let num = complex_gamma(Complex64::new(k as f64, t))?
        * complex_gamma(Complex64::new((n - k + 1) as f64, -t))?;
    let den = complex_gamma(Complex64::new(k as f64, 0.0))?
        * complex_gamma(Complex64::new((n - k + 1) as f64, 0.0))?;
    Ok(num / den)
}

/// CF of an order statistic whose parent has a registered closed form:
/// logistic (any location) and exponential (via `X_{k,n} = sum_{j=n-k+1}^{n} E_j / j`).
pub fn exact_order_stat_cf(spec: &OrderStatistic, t: f64) -> Result<ComplexValue> {
    match spec.parent {
        Distribution::Logistic { mu } => {
            Ok(logistic_order_stat_cf(spec.n, spec.k, t)? * Complex64::new(0.0, mu * t).exp())
        }
        Distribution::Exponential { rate } => {
            let (n, k) = (spec.n, spec.k);
            (n - k + 1..=n).try_fold(Complex64::new(1.0, 0.0), |acc, j| {
                Ok(acc * exponential_cf(t / j as f64, rate)?)
            })
        }
        other => Err(Error::UnsupportedParent(other.to_string())),
    }
}

/// Interval carrying all but `tail` of the order statistic's mass, with the
/// density at each infinite-side endpoint below `density_floor`.
fn truncation_interval(spec: &OrderStatistic, tail: f64, density_floor: f64) -> (f64, f64) {
    let (lo, hi) = spec.parent.support();
    let centre = spec.parent.quantile_pq(0.5, 0.5);
    let mut lower = lo;
    if lo.is_infinite() {
        let mut d = 1.0;
        lower = centre - d;
        while (spec.cdf(lower) >= tail || spec.pdf(lower) >= density_floor) && d < 1e6 {
            d *= 1.5;
            lower = centre - d;
        }
    }
    let mut upper = hi;
    if hi.is_infinite() {
        let mut d = 1.0;
        upper = centre + d;
        while (spec.sf(upper) >= tail || spec.pdf(upper) >= density_floor) && d < 1e6 {
            d *= 1.5;
            upper = centre + d;
        }
    }
    (lower, upper)
}

/// CF of an order statistic by adaptive quadrature of `e^{itx} f_{k,n}(x)`,
/// with absolute error at most `tol` (tail truncation included).
pub fn numerical_cf(spec: &OrderStatistic, t: f64, tol: f64) -> Result<ComplexValue> {
    numerical_cf_with_error(spec, t, tol).map(|(v, _)| v)
}

/// As [`numerical_cf`], also returning the error bound (truncated mass plus quadrature estimate).
pub fn numerical_cf_with_error(
    spec: &OrderStatistic,
    t: f64,
    tol: f64,
) -> Result<(ComplexValue, f64)> {
    if !(tol >= 1e-12) {
        return Err(domain(format!("tolerance {tol:e} below 1e-12")));
    }
    if !t.is_finite() {
        return Err(domain("t must be finite"));
    }
    let tail = tol / 20.0;
    // density floor needs the width; two passes settle it
    let (l0, u0) = truncation_interval(spec, tail, f64::INFINITY);
    let (lower, upper) = truncation_interval(spec, tail, tol / (10.0 * (u0 - l0)));
    let (lower, upper) = (lower.min(l0), upper.max(u0));
    let omitted = spec.cdf(lower) + spec.sf(upper);
    let q = quadrature::integrate(
        |x| Complex64::new(0.0, t * x).exp() * spec.pdf(x),
        lower,
        upper,
        &spec.parent.kinks(),
        tol - omitted,
        QUADRATURE_MAX_INTERVALS,
    )?;
    Ok((q.value, q.abs_error + omitted))
}

/// Sampled characteristic function on a sorted real grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CfGrid {
    t: Vec<f64>,
    values: Vec<ComplexValue>,
    abs_error: Vec<f64>,
}

/// `points` equally spaced values from `t_min` to `t_max` inclusive.
pub fn uniform_points(t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_min < t_max) || points < 2 || !t_min.is_finite() || !t_max.is_finite() {
        return Err(domain(format!(
            "grid needs t_min < t_max and at least 2 points (got [{t_min}, {t_max}], {points})"
        )));
    }
    let step = (t_max - t_min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                t_max
            } else {
                t_min + step * i as f64
            }
        })
        .collect())
}

impl CfGrid {
    pub fn new(t: Vec<f64>, values: Vec<ComplexValue>, abs_error: Vec<f64>) -> Result<Self> {
        if t.len() != values.len() || t.len() != abs_error.len() {
            return Err(domain("grid columns differ in length"));
        }
        if t.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain("grid t values must be strictly increasing"));
        }
        for ((&ti, v), &e) in t.iter().zip(&values).zip(&abs_error) {
            if !(e >= 0.0) {
                return Err(domain(format!("negative error bound at t={ti}")));
            }
            if v.norm() > 1.0 + e {
                return Err(domain(format!(
                    "|cf({ti})| = {} exceeds 1 + {e:e}",
                    v.norm()
                )));
            }
            if ti == 0.0 && (v - 1.0).norm() > e {
                return Err(domain(format!(
                    "cf(0) = {v} differs from 1 by more than {e:e}"
                )));
            }
        }
        Ok(Self {
            t,
            values,
            abs_error,
        })
    }

    /// Evaluates `cf` at each t.
    pub fn from_fn<F>(t: Vec<f64>, mut cf: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<(ComplexValue, f64)>,
    {
        let mut values = Vec::with_capacity(t.len());
        let mut errors = Vec::with_capacity(t.len());
        for &ti in &t {
            let (v, e) = cf(ti)?;
            values.push(v);
            errors.push(e);
        }
        Self::new(t, values, errors)
    }

    /// Exact logistic order-statistic CF on a uniform grid.
    pub fn exact_logistic(n: u32, k: u32, t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        check_rank(n, k)?;
        let bound = (2 * n + 8) as f64 * f64::EPSILON;
        Self::from_fn(uniform_points(t_min, t_max, points)?, |t| {
            Ok((logistic_order_stat_cf(n, k, t)?, bound))
        })
    }

    /// Quadrature CF of an arbitrary order statistic on a uniform grid.
    pub fn numerical(
        spec: &OrderStatistic,
        t_min: f64,
        t_max: f64,
        points: usize,
        tol: f64,
    ) -> Result<Self> {
        Self::from_fn(uniform_points(t_min, t_max, points)?, |t| {
            numerical_cf_with_error(spec, t, tol)
        })
    }

    /// Exact logistic grid wide enough that `|t^(m-1) phi_{k,n}(t)|` has
    /// decayed below 1e-13 at the edges, spaced at most `spacing` apart.
    pub fn for_inversion(n: u32, k: u32, m: u32, spacing: f64) -> Result<Self> {
        check_rank(n, k)?;
        check_order(m)?;
        if !(spacing > 0.0) {
            return Err(domain("grid spacing must be positive"));
        }
        let weight = |t: f64| -> Result<f64> {
            let a = logistic_order_stat_cf(n, k, t)?.norm();
            let b = logistic_order_stat_cf(n, k, -t)?.norm();
            Ok(a.max(b) * t.powi(m as i32 - 1))
        };
        let mut half_width = 1.0;
        while weight(half_width)? >= INVERSION_DECAY_TARGET && half_width < 400.0 {
            half_width += 0.5;
        }
        let intervals = (2.0 * half_width / spacing).ceil() as usize;
        Self::exact_logistic(n, k, -half_width, half_width, intervals + 1)
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t
    }

    pub fn cf_values(&self) -> &[ComplexValue] {
        &self.values
    }

    pub fn abs_error_bound(&self) -> &[f64] {
        &self.abs_error
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Writes `t,re,im,err` CSV with a header row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,re,im,err")?;
        for ((t, v), e) in self.t.iter().zip(&self.values).zip(&self.abs_error) {
            writeln!(out, "{t},{},{},{e}", v.re, v.im)?;
        }
        Ok(())
    }
}

fn check_order(m: u32) -> Result<()> {
    if !(1..=MAX_DERIVATIVE_ORDER).contains(&m) {
        return Err(domain(format!("derivative order m={m} outside [1, 4]")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inversion {
    pub value: f64,
    /// Imaginary part left over by the quadrature; zero in exact arithmetic.
    pub imaginary_residual: f64,
}

/// m-th derivative of the CDF at `x` from a sampled CF:
/// `F^(m)(x) = (-i)^(m-1) / (2 pi) * int e^{-itx} t^(m-1) phi(t) dt`, by the
/// trapezoidal rule over the grid.
pub fn cf_invert_derivative(grid: &CfGrid, m: u32, x: f64) -> Result<Inversion> {
    check_order(m)?;
    if grid.len() < 2 {
        return Err(domain("inversion needs at least two grid points"));
    }
    let power = m as i32 - 1;
    let weighted = |i: usize| grid.values[i] * grid.t[i].powi(power);
    let tail = weighted(0).norm().max(weighted(grid.len() - 1).norm());
    if tail > INVERSION_TAIL_LIMIT {
        return Err(Error::Truncation { tail });
    }
    let integrand = |i: usize| Complex64::new(0.0, -grid.t[i] * x).exp() * weighted(i);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = integrand(0);
    for i in 1..grid.len() {
        let cur = integrand(i);
        sum += (prev + cur) * (0.5 * (grid.t[i] - grid.t[i - 1]));
        prev = cur;
    }
    let rotation = Complex64::new(0.0, -1.0).powi(power);
    let result = rotation * sum / (2.0 * PI);
    Ok(Inversion {
        value: result.re,
        imaginary_residual: result.im.abs(),
    })
}
