//! Distributional identities between shifted order statistics, and their
//! verification by exact characteristic functions and Monte Carlo tests.
//!
//! Each side of an identity is a [`ShiftExpression`]: a base variable (an
//! order statistic, a single parent draw, or zero) plus independent standard
//! exponential or Laplace variates divided by positive integer weights.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::exact_order_stat_cf;
use crate::distributions::{Distribution, OrderStatistic};
use crate::error::{domain, Error, Result};
use crate::rng::RngStream;
use crate::special::{exponential_cf, ComplexValue};
use crate::two_sample::{cvm_test_sorted, ks_test_sorted, sort_sample, TestOutcome, TwoSampleTest};

/// Draws per Monte Carlo chunk; each chunk owns one substream.
const CHUNK: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftKind {
    Exponential,
    Laplace,
}

/// `sign * V / weight` with `V` standard exponential or standard Laplace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shift {
    pub sign: i8,
    pub weight: u32,
    pub kind: ShiftKind,
}

impl Shift {
    pub fn plus(weight: u32) -> Self {
        Self {
            sign: 1,
            weight,
            kind: ShiftKind::Exponential,
        }
    }

    pub fn minus(weight: u32) -> Self {
        Self {
            sign: -1,
            weight,
            kind: ShiftKind::Exponential,
        }
    }

    pub fn laplace(weight: u32) -> Self {
        Self {
            sign: 1,
            weight,
            kind: ShiftKind::Laplace,
        }
    }

    pub fn scale(&self) -> f64 {
        1.0 / self.weight as f64
    }

    fn cf(&self, t: f64) -> ComplexValue {
        let s = self.scale();
        let signed = if self.sign < 0 { -t * s } else { t * s };
        match self.kind {
            ShiftKind::Exponential => exponential_cf(signed, 1.0).expect("unit rate"),
            ShiftKind::Laplace => {
                exponential_cf(signed, 1.0).expect("unit rate")
                    * exponential_cf(-signed, 1.0).expect("unit rate")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Base {
    OrderStatistic(OrderStatistic),
    Parent(Distribution),
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftExpression {
    pub base: Base,
    pub shifts: Vec<Shift>,
}

/// How Laplace shifts are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LaplaceSampling {
    /// `(E' - E'') / j`
    #[default]
    ExponentialDifference,
    /// Inversion of the Laplace CDF.
    Direct,
}

impl ShiftExpression {
    pub fn order_statistic(parent: Distribution, n: u32, k: u32) -> Result<Self> {
        Ok(Self {
            base: Base::OrderStatistic(OrderStatistic::new(parent, n, k)?),
            shifts: Vec::new(),
        })
    }

    pub fn parent(parent: Distribution) -> Self {
        Self {
            base: Base::Parent(parent),
            shifts: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self {
            base: Base::Zero,
            shifts: Vec::new(),
        }
    }

    pub fn with_shifts(mut self, shifts: impl IntoIterator<Item = Shift>) -> Self {
        self.shifts.extend(shifts);
        self
    }

    fn parent_distribution(&self) -> Option<Distribution> {
        match self.base {
            Base::OrderStatistic(s) => Some(s.parent),
            Base::Parent(d) => Some(d),
            Base::Zero => None,
        }
    }

    fn with_parent(&self, parent: Distribution) -> Self {
        let base = match self.base {
            Base::OrderStatistic(s) => Base::OrderStatistic(OrderStatistic { parent, ..s }),
            Base::Parent(_) => Base::Parent(parent),
            Base::Zero => Base::Zero,
        };
        Self {
            base,
            shifts: self.shifts.clone(),
        }
    }
}

impl fmt::Display for ShiftExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            Base::OrderStatistic(s) => write!(f, "X_{{{},{}}}", s.k, s.n)?,
            Base::Parent(_) => write!(f, "X")?,
            Base::Zero => {
                if self.shifts.is_empty() {
                    write!(f, "0")?
                }
            }
        }
        for (i, s) in self.shifts.iter().enumerate() {
            let sign = if s.sign < 0 { "-" } else { "+" };
            let leading = i == 0 && self.base == Base::Zero;
            match (leading, s.sign < 0) {
                (true, false) => {}
                (true, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            match s.kind {
                ShiftKind::Exponential => write!(f, "E/{}", s.weight)?,
                ShiftKind::Laplace => write!(f, "La_{}", s.weight)?,
            }
        }
        Ok(())
    }
}

/// Which identity family an [`IdentitySpec`] instantiates, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyParams {
    /// `X_{k+r,n} - sum_{j=k}^{k+r-1} E'_j/j =d X_{k,n} + sum_{j=k}^{k+r-1} E''_j/(n-j)`
    Theorem1 { r: u32, k: u32, n: u32 },
    /// `X_{m,n} - sum_{j=k}^{m-1} E'_j/j =d X_{k,n} + sum_{j=k}^{m-1} E''_j/(n-j)`
    Lemma1i { k: u32, m: u32, n: u32 },
    /// `X =d X_{k,n} + sum_{j=1}^{n-k} E'_j/j - sum_{j=1}^{k-1} E''_j/j`
    Lemma1ii { k: u32, n: u32 },
    /// `X =d X_{k,2k-1} + sum_{j=1}^{k-1} La_j`
    Median { k: u32 },
    /// `max(E'_1..E'_n) =d sum_{j=1}^{n} E'_j/j`
    MaxExp { n: u32 },
}

impl FamilyParams {
    pub fn n(&self) -> u32 {
        match *self {
            Self::Theorem1 { n, .. } | Self::Lemma1i { n, .. } | Self::Lemma1ii { n, .. } => n,
            Self::Median { k } => 2 * k - 1,
            Self::MaxExp { n } => n,
        }
    }

    pub fn selector(&self) -> String {
        match *self {
            Self::Theorem1 { r, k, n } => format!("theorem1:r={r},k1={k},n={n}"),
            Self::Lemma1i { k, m, n } => format!("lemma1i:k={k},m={m},n={n}"),
            Self::Lemma1ii { k, n } => format!("lemma1ii:k={k},n={n}"),
            Self::Median { k } => format!("median:k={k}"),
            Self::MaxExp { n } => format!("maxexp:n={n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub label: String,
    pub family_params: FamilyParams,
    pub lhs: ShiftExpression,
    pub rhs: ShiftExpression,
}

fn shifted_pair(
    parent: Distribution,
    k: u32,
    m: u32,
    n: u32,
) -> Result<(ShiftExpression, ShiftExpression)> {
    let lhs = ShiftExpression::order_statistic(parent, n, m)?.with_shifts((k..m).map(Shift::minus));
    let rhs = ShiftExpression::order_statistic(parent, n, k)?
        .with_shifts((k..m).map(|j| Shift::plus(n - j)));
    Ok((lhs, rhs))
}

impl IdentitySpec {
    pub fn new(params: FamilyParams) -> Result<Self> {
        Self::with_parent(params, Distribution::STANDARD_LOGISTIC)
    }

    /// Builds the identity with both sides drawn from `parent`. The
    /// max-exponential identity always uses the standard exponential.
    pub fn with_parent(params: FamilyParams, parent: Distribution) -> Result<Self> {
        let parent = parent.validated()?;
        let (lhs, rhs) = match params {
            FamilyParams::Theorem1 { r, k, n } => {
                if !(1..=3).contains(&r) {
                    return Err(domain(format!("theorem1 needs r in 1..=3, got {r}")));
                }
                if k < 1 || k + r > n {
                    return Err(domain(format!(
                        "theorem1 needs 1 <= k <= n-r, got k={k} n={n} r={r}"
                    )));
                }
                shifted_pair(parent, k, k + r, n)?
            }
            FamilyParams::Lemma1i { k, m, n } => {
                if !(1 <= k && k < m && m <= n) {
                    return Err(domain(format!(
                        "lemma1i needs 1 <= k < m <= n, got k={k} m={m} n={n}"
                    )));
                }
                shifted_pair(parent, k, m, n)?
            }
            FamilyParams::Lemma1ii { k, n } => {
                if !(1 <= k && k <= n) {
                    return Err(domain(format!(
                        "lemma1ii needs 1 <= k <= n, got k={k} n={n}"
                    )));
                }
                let rhs = ShiftExpression::order_statistic(parent, n, k)?
                    .with_shifts((1..=n - k).map(Shift::plus))
                    .with_shifts((1..k).map(Shift::minus));
                (ShiftExpression::parent(parent), rhs)
            }
            FamilyParams::Median { k } => {
                if k < 2 {
                    return Err(domain(format!("median identity needs k >= 2, got {k}")));
                }
                let rhs = ShiftExpression::order_statistic(parent, 2 * k - 1, k)?
                    .with_shifts((1..k).map(Shift::laplace));
                (ShiftExpression::parent(parent), rhs)
            }
            FamilyParams::MaxExp { n } => {
                if n < 1 {
                    return Err(domain("maxexp needs n >= 1"));
                }
                let lhs =
                    ShiftExpression::order_statistic(Distribution::STANDARD_EXPONENTIAL, n, n)?;
                let rhs = ShiftExpression::zero().with_shifts((1..=n).map(Shift::plus));
                (lhs, rhs)
            }
        };
        Ok(Self {
            label: params.selector(),
            family_params: params,
            lhs,
            rhs,
        })
    }

    /// Same identity under a different parent (no-op for the max-exponential identity).
    pub fn reparented(&self, parent: Distribution) -> Self {
        if matches!(self.family_params, FamilyParams::MaxExp { .. }) {
            return self.clone();
        }
        Self {
            lhs: self.lhs.with_parent(parent),
            rhs: self.rhs.with_parent(parent),
            ..self.clone()
        }
    }

    pub fn parent(&self) -> Distribution {
        self.lhs
            .parent_distribution()
            .or_else(|| self.rhs.parent_distribution())
            .expect("one side has a parent")
    }

    pub fn n(&self) -> u32 {
        self.family_params.n()
    }
}

impl fmt::Display for IdentitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =d {}", self.lhs, self.rhs)
    }
}

/// Every built-in identity with sample size at most `max_n`, standard logistic parent.
pub fn catalog(max_n: u32) -> Vec<IdentitySpec> {
    let mut params = Vec::new();
    for r in 1..=3 {
        for n in 1..=max_n {
            for k in 1..=n.saturating_sub(r) {
                params.push(FamilyParams::Theorem1 { r, k, n });
            }
        }
    }
    for n in 1..=max_n {
        for m in 2..=n {
            for k in 1..m {
                params.push(FamilyParams::Lemma1i { k, m, n });
            }
        }
    }
    for n in 1..=max_n {
        for k in 1..=n {
            params.push(FamilyParams::Lemma1ii { k, n });
        }
    }
    params.extend(
        (2..)
            .take_while(|k| 2 * k - 1 <= max_n)
            .map(|k| FamilyParams::Median { k }),
    );
    params.extend((1..=max_n).map(|n| FamilyParams::MaxExp { n }));
    params
        .into_iter()
        .map(|p| IdentitySpec::new(p).expect("catalog parameters are in range"))
        .collect()
}

/// A parsed selector: one or more identities checked together.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySelection {
    pub selector: String,
    pub identities: Vec<IdentitySpec>,
    /// Whether passing all identities is evidence for the logistic law itself
    /// rather than a necessary condition only. Theorem1 with r >= 2 needs r
    /// distinct ranks for this.
    pub characterization_level: bool,
}

/// Parses selectors such as `theorem1:r=2,k1=1,k2=2,n=5`, `lemma1i:k=2,m=4,n=5`,
/// `lemma1ii:k=3,n=5`, `median:k=3` or `maxexp:n=6`.
pub fn parse_selector(selector: &str) -> Result<IdentitySelection> {
    let err = |reason: String| Error::Parse {
        what: "identity selector",
        input: selector.to_string(),
        reason,
    };
    let (family, rest) = selector
        .trim()
        .split_once(':')
        .ok_or_else(|| err("expected family:key=value,...".into()))?;
    let mut keys: Vec<(String, u32)> = Vec::new();
    for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {part:?}")))?;
        let v: u32 = v
            .trim()
            .parse()
            .map_err(|_| err(format!("{v:?} is not a non-negative integer")))?;
        let k = k.trim().to_ascii_lowercase();
        if keys.iter().any(|(seen, _)| *seen == k) {
            return Err(err(format!("duplicate key {k:?}")));
        }
        keys.push((k, v));
    }
    let get = |name: &str| -> Result<u32> {
        keys.iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| err(format!("missing key {name:?}")))
    };
    let family = family.trim().to_ascii_lowercase();
    let allowed = |names: &[&str]| -> Result<()> {
        match keys.iter().find(|(k, _)| !names.contains(&k.as_str())) {
            Some((k, _)) => Err(err(format!("unexpected key {k:?}"))),
            None => Ok(()),
        }
    };
    let build = |p: FamilyParams| IdentitySpec::new(p).map_err(|e| err(e.to_string()));

    let (identities, characterization_level) = match family.as_str() {
        "theorem1" => {
            let r = get("r")?;
            let n = get("n")?;
            let mut ranks: Vec<(u32, u32)> = keys
                .iter()
                .filter_map(|(k, v)| {
                    let idx = k.strip_prefix('k')?;
                    let idx = if idx.is_empty() { 1 } else { idx.parse().ok()? };
                    Some((idx, *v))
                })
                .collect();
            if keys
                .iter()
                .any(|(k, _)| k != "r" && k != "n" && !k.starts_with('k'))
            {
                return Err(err("theorem1 takes r, n and k1..kr".into()));
            }
            ranks.sort();
            let ks: Vec<u32> = ranks.into_iter().map(|(_, v)| v).collect();
            if ks.is_empty() {
                return Err(err("theorem1 needs at least one rank k1".into()));
            }
            if ks.len() > r as usize {
                return Err(err(format!("theorem1 with r={r} takes at most {r} ranks")));
            }
            let mut distinct = ks.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != ks.len() {
                return Err(err("theorem1 ranks must be distinct".into()));
            }
            let ids = ks
                .iter()
                .map(|&k| build(FamilyParams::Theorem1 { r, k, n }))
                .collect::<Result<Vec<_>>>()?;
            (ids, ks.len() == r as usize)
        }
        "lemma1i" => {
            allowed(&["k", "m", "n"])?;
            let p = FamilyParams::Lemma1i {
                k: get("k")?,
                m: get("m")?,
                n: get("n")?,
            };
            (vec![build(p)?], false)
        }
        "lemma1ii" => {
            allowed(&["k", "n"])?;
            let (k, n) = (get("k")?, get("n")?);
            (vec![build(FamilyParams::Lemma1ii { k, n })?], k < n)
        }
        "median" => {
            allowed(&["k"])?;
            (vec![build(FamilyParams::Median { k: get("k")? })?], true)
        }
        "maxexp" => {
            allowed(&["n"])?;
            (vec![build(FamilyParams::MaxExp { n: get("n")? })?], false)
        }
        other => return Err(err(format!("unknown identity family {other:?}"))),
    };
    Ok(IdentitySelection {
        selector: selector.trim().to_string(),
        identities,
        characterization_level,
    })
}

/// Exact CF of one side: base CF times the CF of every shift.
pub fn exact_cf_side(expr: &ShiftExpression, t: f64) -> Result<ComplexValue> {
    let base = match expr.base {
        Base::OrderStatistic(s) => exact_order_stat_cf(&s, t)?,
        Base::Parent(d) => exact_order_stat_cf(&OrderStatistic::new(d, 1, 1)?, t)?,
        Base::Zero => Complex64::new(1.0, 0.0),
    };
    Ok(expr.shifts.iter().fold(base, |acc, s| acc * s.cf(t)))
}

/// `count` draws of one side. The base uses substream 0 and shift `i` uses substream `i + 1`.
pub fn sample_side(expr: &ShiftExpression, rng: &RngStream, count: usize) -> Vec<f64> {
    sample_side_with(expr, rng, count, LaplaceSampling::default())
}

pub fn sample_side_with(
    expr: &ShiftExpression,
    rng: &RngStream,
    count: usize,
    laplace: LaplaceSampling,
) -> Vec<f64> {
    let mut base_rng = rng.split(0);
    let mut out = match expr.base {
        Base::OrderStatistic(s) => s.sample(&mut base_rng, count),
        Base::Parent(d) => d.sample(&mut base_rng, count),
        Base::Zero => vec![0.0; count],
    };
    for (i, shift) in expr.shifts.iter().enumerate() {
        let mut r = rng.split(i as u64 + 1);
        let sign = if shift.sign < 0 { -1.0 } else { 1.0 };
        let scale = sign * shift.scale();
        match (shift.kind, laplace) {
            (ShiftKind::Exponential, _) => {
                out.iter_mut().for_each(|x| *x += scale * r.exp1());
            }
            (ShiftKind::Laplace, LaplaceSampling::ExponentialDifference) => {
                out.iter_mut()
                    .for_each(|x| *x += scale * (r.exp1() - r.exp1()));
            }
            (ShiftKind::Laplace, LaplaceSampling::Direct) => {
                let standard = Distribution::Laplace { j: 1 };
                out.iter_mut().for_each(|x| {
                    let u = r.uniform();
                    *x += scale * standard.quantile_pq(u, 1.0 - u);
                });
            }
        }
    }
    out
}

/// Draws `count` values of `expr` in fixed-size chunks, chunk `c` on substream `c`.
/// The result does not depend on the number of worker threads.
pub fn sample_side_chunked(expr: &ShiftExpression, rng: &RngStream, count: usize) -> Vec<f64> {
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(count - c * CHUNK);
            sample_side(expr, &rng.split(c as u64), len)
        })
        .collect();
    parts.concat()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationConfig {
    pub sample_size: usize,
    pub alpha: f64,
    pub t_grid: Vec<f64>,
    pub seed: u64,
    pub cf_threshold: f64,
    pub test: TwoSampleTest,
}

pub const MIN_SAMPLE_SIZE: usize = 10_000;
pub const DEFAULT_CF_THRESHOLD: f64 = 1e-12;

impl Default for VerificationConfig {
    fn default() -> Self {
        Self {
            sample_size: 1_000_000,
            alpha: 0.01,
            t_grid: crate::cf::uniform_points(-5.0, 5.0, 41).expect("valid grid"),
            seed: 0,
            cf_threshold: DEFAULT_CF_THRESHOLD,
            test: TwoSampleTest::Ks,
        }
    }
}

impl VerificationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_size < MIN_SAMPLE_SIZE {
            return Err(domain(format!(
                "sample size {} below the minimum {MIN_SAMPLE_SIZE}",
                self.sample_size
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(domain(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !t.is_finite()) {
            return Err(domain("CF grid must be non-empty and finite"));
        }
        if !(self.cf_threshold > 0.0) {
            return Err(domain("CF threshold must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Rejected,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Consistent => "consistent",
            Self::Rejected => "rejected",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: IdentitySpec,
    pub statement: String,
    pub parent: Distribution,
    /// Absent when the parent has no closed-form order-statistic CF.
    pub cf_max_abs_diff: Option<f64>,
    pub cf_threshold: f64,
    pub cf_grid_points: usize,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cvm_statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cvm_p_value: Option<f64>,
    pub test: TwoSampleTest,
    pub alpha: f64,
    pub sample_size: usize,
    pub seed: u64,
    pub verdict: Verdict,
}

impl VerificationReport {
    /// p-value of the test that decided the verdict.
    pub fn p_value(&self) -> f64 {
        match self.test {
            TwoSampleTest::Ks => self.ks_p_value,
            TwoSampleTest::Cvm => self.cvm_p_value.unwrap_or(self.ks_p_value),
        }
    }

    pub fn cf_passed(&self) -> Option<bool> {
        self.cf_max_abs_diff.map(|d| d <= self.cf_threshold)
    }

    pub fn summary(&self) -> String {
        let cf = match self.cf_max_abs_diff {
            Some(d) => format!("cf_diff={d:.3e} (thr {:.0e})", self.cf_threshold),
            None => "cf_diff=n/a".to_string(),
        };
        format!(
            "{} [{}] parent={} {cf} ks_D={:.3e} ks_p={:.4} N={} seed={} -> {}",
            self.identity.label,
            self.statement,
            self.parent,
            self.ks_statistic,
            self.ks_p_value,
            self.sample_size,
            self.seed,
            self.verdict
        )
    }
}

fn decide(cf_ok: Option<bool>, test_ok: bool) -> Verdict {
    match (cf_ok, test_ok) {
        (Some(true) | None, true) => Verdict::Consistent,
        (Some(false) | None, false) => Verdict::Rejected,
        _ => Verdict::Inconclusive,
    }
}

/// Max over `grid` of `|phi_lhs(t) - phi_rhs(t)|`, or `None` when the parent
/// has no closed-form CF.
pub fn exact_cf_distance(identity: &IdentitySpec, grid: &[f64]) -> Result<Option<f64>> {
    let mut max = 0.0f64;
    for &t in grid {
        let l = exact_cf_side(&identity.lhs, t);
        let r = exact_cf_side(&identity.rhs, t);
        match (l, r) {
            (Ok(l), Ok(r)) => max = max.max((l - r).norm()),
            (Err(Error::UnsupportedParent(_)), _) | (_, Err(Error::UnsupportedParent(_))) => {
                return Ok(None)
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(Some(max))
}

/// Monte Carlo two-sample outcome for both sides: `(ks, cvm if requested)`.
pub fn monte_carlo_outcome(
    identity: &IdentitySpec,
    sample_size: usize,
    seed: u64,
    test: TwoSampleTest,
) -> (TestOutcome, Option<TestOutcome>) {
    let root = RngStream::new(seed);
    let mut lhs = sample_side_chunked(&identity.lhs, &root.split(1), sample_size);
    let mut rhs = sample_side_chunked(&identity.rhs, &root.split(2), sample_size);
    sort_sample(&mut lhs);
    sort_sample(&mut rhs);
    let ks = ks_test_sorted(&lhs, &rhs);
    let cvm = (test == TwoSampleTest::Cvm).then(|| cvm_test_sorted(&lhs, &rhs));
    (ks, cvm)
}

/// Exact CF comparison (when available) plus a two-sample test on
/// independent Monte Carlo draws of both sides.
pub fn verify(identity: &IdentitySpec, config: &VerificationConfig) -> Result<VerificationReport> {
    config.validate()?;
    let cf_max_abs_diff = exact_cf_distance(identity, &config.t_grid)?;
    let (ks, cvm) = monte_carlo_outcome(identity, config.sample_size, config.seed, config.test);
    let p = match config.test {
        TwoSampleTest::Ks => ks.p_value,
        TwoSampleTest::Cvm => cvm.map_or(ks.p_value, |c| c.p_value),
    };
    let cf_ok = cf_max_abs_diff.map(|d| d <= config.cf_threshold);
    Ok(VerificationReport {
        identity: identity.clone(),
        statement: identity.to_string(),
        parent: identity.parent(),
        cf_max_abs_diff,
        cf_threshold: config.cf_threshold,
        cf_grid_points: config.t_grid.len(),
        ks_statistic: ks.statistic,
        ks_p_value: ks.p_value,
        cvm_statistic: cvm.map(|c| c.statistic),
        cvm_p_value: cvm.map(|c| c.p_value),
        test: config.test,
        alpha: config.alpha,
        sample_size: config.sample_size,
        seed: config.seed,
        verdict: decide(cf_ok, p >= config.alpha),
    })
}

/// Bonferroni-adjusted verdict over a family of reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub alpha: f64,
    pub tests: usize,
    pub adjusted_alpha: f64,
    pub min_p_value: f64,
    pub unadjusted_rejections: usize,
    pub cf_failures: usize,
    pub verdict: Verdict,
}

pub fn family_verdict(reports: &[VerificationReport], alpha: f64) -> FamilyVerdict {
    let tests = reports.len().max(1);
    let adjusted_alpha = alpha / tests as f64;
    let min_p_value = reports.iter().map(|r| r.p_value()).fold(1.0, f64::min);
    let unadjusted_rejections = reports.iter().filter(|r| r.p_value() < alpha).count();
    let cf_failures = reports
        .iter()
        .filter(|r| r.cf_passed() == Some(false))
        .count();
    let cf_ok = if reports.iter().any(|r| r.cf_passed().is_some()) {
        Some(cf_failures == 0)
    } else {
        None
    };
    FamilyVerdict {
        alpha,
        tests: reports.len(),
        adjusted_alpha,
        min_p_value,
        unadjusted_rejections,
        cf_failures,
        verdict: decide(cf_ok, min_p_value >= adjusted_alpha),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::logistic_cf;

    #[test]
    fn theorem1_adjacent_example() {
        let id = IdentitySpec::new(FamilyParams::Theorem1 { r: 1, k: 2, n: 4 }).unwrap();
        assert_eq!(id.to_string(), "X_{3,4} - E/2 =d X_{2,4} + E/2");
        assert_eq!(id.lhs.shifts, vec![Shift::minus(2)]);
        assert_eq!(id.rhs.shifts, vec![Shift::plus(2)]);
    }

    #[test]
    fn lemma1ii_empty_second_sum() {
        let id = IdentitySpec::new(FamilyParams::Lemma1ii { k: 1, n: 3 }).unwrap();
        assert_eq!(id.to_string(), "X =d X_{1,3} + E/1 + E/2");
    }

    #[test]
    fn median_uses_laplace() {
        let id = IdentitySpec::new(FamilyParams::Median { k: 2 }).unwrap();
        assert_eq!(id.to_string(), "X =d X_{2,3} + La_1");
        assert!(IdentitySpec::new(FamilyParams::Median { k: 1 }).is_err());
    }

    #[test]
    fn maxexp_shape() {
        let id = IdentitySpec::new(FamilyParams::MaxExp { n: 3 }).unwrap();
        assert_eq!(id.to_string(), "X_{3,3} =d E/1 + E/2 + E/3");
        assert_eq!(id.parent(), Distribution::STANDARD_EXPONENTIAL);
        assert_eq!(id.reparented(Distribution::Uniform01), id);
    }

    #[test]
    fn parameter_ranges() {
        assert!(IdentitySpec::new(FamilyParams::Theorem1 { r: 4, k: 1, n: 6 }).is_err());
        assert!(IdentitySpec::new(FamilyParams::Theorem1 { r: 2, k: 3, n: 4 }).is_err());
        assert!(IdentitySpec::new(FamilyParams::Lemma1i { k: 2, m: 2, n: 4 }).is_err());
        assert!(IdentitySpec::new(FamilyParams::Lemma1i { k: 1, m: 5, n: 4 }).is_err());
        assert!(IdentitySpec::new(FamilyParams::Lemma1ii { k: 0, n: 4 }).is_err());
        assert!(IdentitySpec::new(FamilyParams::MaxExp { n: 0 }).is_err());
    }

    #[test]
    fn catalog_counts() {
        let all = catalog(6);
        let count =
            |f: fn(&FamilyParams) -> bool| all.iter().filter(|i| f(&i.family_params)).count();
        assert_eq!(
            count(|p| matches!(p, FamilyParams::Theorem1 { .. })),
            15 + 10 + 6
        );
        assert_eq!(count(|p| matches!(p, FamilyParams::Lemma1i { .. })), 35);
        assert_eq!(count(|p| matches!(p, FamilyParams::Lemma1ii { .. })), 21);
        assert_eq!(count(|p| matches!(p, FamilyParams::Median { .. })), 2);
        assert_eq!(count(|p| matches!(p, FamilyParams::MaxExp { .. })), 6);
        assert!(all.iter().all(|i| i.n() <= 6));
    }

    #[test]
    fn selectors_round_trip_through_catalog() {
        for id in catalog(5) {
            let sel = parse_selector(&id.label).unwrap();
            assert_eq!(sel.identities, vec![id]);
        }
    }

    #[test]
    fn theorem1_selector_rank_sets() {
        let sel = parse_selector("theorem1:r=2,k1=1,k2=2,n=5").unwrap();
        assert_eq!(sel.identities.len(), 2);
        assert!(sel.characterization_level);
        let single = parse_selector("theorem1:r=2,k1=1,n=5").unwrap();
        assert!(!single.characterization_level);
        assert!(
            parse_selector("theorem1:r=1,k1=1,n=3")
                .unwrap()
                .characterization_level
        );
        for bad in [
            "theorem1:r=2,k1=1,k2=1,n=5",
            "theorem1:r=1,k1=1,k2=2,n=5",
            "theorem1:r=2,n=5",
            "theorem1:r=2,k1=4,n=5",
            "lemma1i:k=2,m=4",
            "lemma1i:k=2,m=4,n=5,x=1",
            "median:k=1",
            "bogus:n=1",
            "maxexp",
            "maxexp:n=-1",
        ] {
            assert!(parse_selector(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_cf_examples() {
        let x = ShiftExpression::parent(Distribution::STANDARD_LOGISTIC);
        for t in [-1.0, 0.5, 3.0] {
            assert_eq!(exact_cf_side(&x, t).unwrap(), logistic_cf(t));
        }
        let id = IdentitySpec::new(FamilyParams::Lemma1i { k: 1, m: 2, n: 2 }).unwrap();
        let d =
            (exact_cf_side(&id.lhs, 1.0).unwrap() - exact_cf_side(&id.rhs, 1.0).unwrap()).norm();
        assert!(d <= 1e-14);
        let id = IdentitySpec::new(FamilyParams::Lemma1ii { k: 2, n: 3 }).unwrap();
        for t in [0.5, 1.0, 2.0] {
            assert!((exact_cf_side(&id.rhs, t).unwrap() - logistic_cf(t)).norm() <= 1e-13);
        }
        let normal = id.reparented(Distribution::normal(0.0, 1.0).unwrap());
        assert!(matches!(
            exact_cf_side(&normal.rhs, 1.0),
            Err(Error::UnsupportedParent(_))
        ));
        assert_eq!(exact_cf_distance(&normal, &[0.0, 1.0]).unwrap(), None);
    }

    #[test]
    fn verdict_rule() {
        assert_eq!(decide(Some(true), true), Verdict::Consistent);
        assert_eq!(decide(None, true), Verdict::Consistent);
        assert_eq!(decide(Some(false), false), Verdict::Rejected);
        assert_eq!(decide(None, false), Verdict::Rejected);
        assert_eq!(decide(Some(true), false), Verdict::Inconclusive);
        assert_eq!(decide(Some(false), true), Verdict::Inconclusive);
    }

    #[test]
    fn config_validation() {
        let mut c = VerificationConfig::default();
        assert!(c.validate().is_ok());
        c.sample_size = 999;
        assert!(c.validate().is_err());
        let c = VerificationConfig {
            alpha: 1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_shift_side_matches_order_statistic_sampler() {
        let spec = OrderStatistic::new(Distribution::STANDARD_LOGISTIC, 4, 3).unwrap();
        let expr = ShiftExpression::order_statistic(spec.parent, 4, 3).unwrap();
        let rng = RngStream::new(5);
        let via_side = sample_side(&expr, &rng, 100);
        let direct = spec.sample(&mut rng.split(0), 100);
        assert_eq!(via_side, direct);
    }

    #[test]
    fn chunked_sampling_is_deterministic() {
        let id = IdentitySpec::new(FamilyParams::Median { k: 3 }).unwrap();
        let rng = RngStream::new(9);
        let a = sample_side_chunked(&id.rhs, &rng, 150_000);
        let b = sample_side_chunked(&id.rhs, &rng, 150_000);
        assert_eq!(a.len(), 150_000);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
