//! Parent distributions and the distributions of their order statistics.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution as _, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{domain, Error, Result};
use crate::rng::RngStream;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A parent distribution. `Laplace { j }` has density `j exp(-j|x|) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Distribution {
    Logistic { mu: f64 },
    Exponential { rate: f64 },
    Laplace { j: u32 },
    Uniform01,
    Normal { mu: f64, sigma: f64 },
}

impl Distribution {
    pub const STANDARD_LOGISTIC: Distribution = Distribution::Logistic { mu: 0.0 };
    pub const STANDARD_EXPONENTIAL: Distribution = Distribution::Exponential { rate: 1.0 };

    pub fn logistic(mu: f64) -> Result<Self> {
        Self::Logistic { mu }.validated()
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::Exponential { rate }.validated()
    }

    pub fn laplace(j: u32) -> Result<Self> {
        Self::Laplace { j }.validated()
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::Normal { mu, sigma }.validated()
    }

    /// Normal law with the mean and variance of the standard logistic (0, pi^2/3).
    pub fn variance_matched_normal() -> Self {
        Self::Normal {
            mu: 0.0,
            sigma: std::f64::consts::PI / 3f64.sqrt(),
        }
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            Self::Logistic { mu } if !mu.is_finite() => Err(domain("logistic mu must be finite")),
            Self::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => Err(domain(
                format!("exponential rate must be positive, got {rate}"),
            )),
            Self::Laplace { j: 0 } => Err(domain("laplace index j must be a positive integer")),
            Self::Normal { mu, sigma }
                if !mu.is_finite() || !(sigma > 0.0 && sigma.is_finite()) =>
            {
                Err(domain(format!(
                    "normal needs finite mu and positive sigma, got mu={mu} sigma={sigma}"
                )))
            }
            d => Ok(d),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Logistic { .. } => "logistic",
            Self::Exponential { .. } => "exponential",
            Self::Laplace { .. } => "laplace",
            Self::Uniform01 => "uniform01",
            Self::Normal { .. } => "normal",
        }
    }

    pub fn is_standard_logistic(&self) -> bool {
        matches!(self, Self::Logistic { mu } if *mu == 0.0)
    }

    /// Closed support interval.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Exponential { .. } => (0.0, f64::INFINITY),
            Self::Uniform01 => (0.0, 1.0),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Points where the density is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Self::Laplace { .. } => vec![0.0],
            _ => Vec::new(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Logistic { mu } => logistic_cdf(x - mu),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::Laplace { j } => {
                let j = j as f64;
                if x < 0.0 {
                    0.5 * (j * x).exp()
                } else {
                    1.0 - 0.5 * (-j * x).exp()
                }
            }
            Self::Uniform01 => x.clamp(0.0, 1.0),
            Self::Normal { mu, sigma } => 0.5 * erfc(-(x - mu) / (sigma * SQRT_2)),
        }
    }

    /// Survival function `1 - F(x)`, accurate in the right tail.
    pub fn sf(&self, x: f64) -> f64 {
        match *self {
            Self::Logistic { mu } => logistic_cdf(mu - x),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            Self::Laplace { j } => {
                let j = j as f64;
                if x < 0.0 {
                    1.0 - 0.5 * (j * x).exp()
                } else {
                    0.5 * (-j * x).exp()
                }
            }
            Self::Uniform01 => 1.0 - x.clamp(0.0, 1.0),
            Self::Normal { mu, sigma } => 0.5 * erfc((x - mu) / (sigma * SQRT_2)),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Logistic { mu } => {
                let e = (-(x - mu).abs()).exp();
                e / ((1.0 + e) * (1.0 + e))
            }
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Self::Laplace { j } => {
                let j = j as f64;
                0.5 * j * (-j * x.abs()).exp()
            }
            Self::Uniform01 => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                FRAC_1_SQRT_2PI / sigma * (-0.5 * z * z).exp()
            }
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("probability {p} outside [0, 1]")));
        }
        Ok(self.quantile_pq(p, 1.0 - p))
    }

    /// Quantile at probability `p` given both `p` and `q = 1 - p`, so that
    /// callers holding an accurate upper tail probability keep its precision.
    pub fn quantile_pq(&self, p: f64, q: f64) -> f64 {
        match *self {
            Self::Logistic { mu } => mu + (p.ln() - q.ln()),
            Self::Exponential { rate } => {
                if p < 0.5 {
                    -(-p).ln_1p() / rate
                } else {
                    -q.ln() / rate
                }
            }
            Self::Laplace { j } => {
                let j = j as f64;
                if p < 0.5 {
                    (2.0 * p).ln() / j
                } else {
                    -(2.0 * q).ln() / j
                }
            }
            Self::Uniform01 => {
                if p < 0.5 {
                    p
                } else {
                    1.0 - q
                }
            }
            Self::Normal { mu, sigma } => {
                let z = if p < 0.5 {
                    -SQRT_2 * erfc_inv(2.0 * p)
                } else {
                    SQRT_2 * erfc_inv(2.0 * q)
                };
                mu + sigma * z
            }
        }
    }

    #[inline]
    pub fn sample_one(&self, rng: &mut RngStream) -> f64 {
        match *self {
            Self::Laplace { j } => (rng.exp1() - rng.exp1()) / j as f64,
            Self::Exponential { rate } => rng.exp1() / rate,
            _ => {
                let u = rng.uniform();
                self.quantile_pq(u, 1.0 - u)
            }
        }
    }

    /// `count` i.i.d. draws by inversion (Laplace as a difference of exponentials).
    pub fn sample(&self, rng: &mut RngStream, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }
}

#[inline]
fn logistic_cdf(y: f64) -> f64 {
    if y >= 0.0 {
        1.0 / (1.0 + (-y).exp())
    } else {
        let e = y.exp();
        e / (1.0 + e)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Logistic { mu } => write!(f, "logistic,mu={mu}"),
            Self::Exponential { rate } => write!(f, "exponential,rate={rate}"),
            Self::Laplace { j } => write!(f, "laplace,j={j}"),
            Self::Uniform01 => write!(f, "uniform01"),
            Self::Normal { mu, sigma } => write!(f, "normal,mu={mu},sigma={sigma}"),
        }
    }
}

/// Parses `family[,key=value...]`, e.g. `normal,mu=0,sigma=1.8138`.
impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse {
            what: "distribution",
            input: s.to_string(),
            reason,
        };
        let mut parts = s.split(',').map(str::trim);
        let family = parts.next().unwrap_or_default().to_ascii_lowercase();
        let mut params = Vec::new();
        for part in parts.filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got {part:?}")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad number {value:?}")))?;
            params.push((key.trim().to_ascii_lowercase(), value));
        }
        let allowed: &[&str] = match family.as_str() {
            "logistic" => &["mu"],
            "exponential" => &["rate"],
            "laplace" => &["j"],
            "uniform01" => &[],
            "normal" => &["mu", "sigma"],
            other => return Err(parse_err(format!("unknown family {other:?}"))),
        };
        if let Some((key, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(parse_err(format!("unknown parameter {key:?} for {family}")));
        }
        let get = |key: &str, default: f64| {
            params
                .iter()
                .rev()
                .find(|(k, _)| k == key)
                .map_or(default, |(_, v)| *v)
        };
        let d = match family.as_str() {
            "logistic" => Self::Logistic { mu: get("mu", 0.0) },
            "exponential" => Self::Exponential {
                rate: get("rate", 1.0),
            },
            "laplace" => {
                let j = get("j", 1.0);
                if j.fract() != 0.0 || j < 1.0 || j > u32::MAX as f64 {
                    return Err(parse_err("laplace j must be a positive integer".into()));
                }
                Self::Laplace { j: j as u32 }
            }
            "uniform01" => Self::Uniform01,
            _ => Self::Normal {
                mu: get("mu", 0.0),
                sigma: get("sigma", 1.0),
            },
        };
        d.validated().map_err(|e| parse_err(e.to_string()))
    }
}

/// Binomial coefficient as a float; exact for the sample sizes used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sum_{j=from}^{to} C(n,j) F^j S^(n-j)` with `S = 1 - F` supplied separately.
pub fn binomial_terms(n: u32, from: u32, to: u32, f: f64, s: f64) -> f64 {
    (from..=to.min(n))
        .map(|j| binomial(n, j) * f.powi(j as i32) * s.powi((n - j) as i32))
        .sum()
}

/// The k-th smallest of n i.i.d. draws from `parent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderStatistic {
    pub parent: Distribution,
    pub n: u32,
    pub k: u32,
}

impl OrderStatistic {
    pub fn new(parent: Distribution, n: u32, k: u32) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(domain(format!("rank k={k} outside [1, n={n}]")));
        }
        Ok(Self {
            parent: parent.validated()?,
            n,
            k,
        })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let (n, k) = (self.n, self.k);
        let f = self.parent.pdf(x);
        if f == 0.0 {
            return 0.0;
        }
        let big_f = self.parent.cdf(x);
        let s = self.parent.sf(x);
        k as f64 * binomial(n, k) * big_f.powi(k as i32 - 1) * s.powi((n - k) as i32) * f
    }

    /// `P(X_{k,n} <= x) = sum_{j=k}^{n} C(n,j) F^j (1-F)^(n-j)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.tails(x).0
    }

    /// `P(X_{k,n} > x)`, accurate in the right tail.
    pub fn sf(&self, x: f64) -> f64 {
        self.tails(x).1
    }

    /// (cdf, sf). The smaller one is summed directly and the larger is its
    /// complement, so values near 1 stay monotone in `x`.
    fn tails(&self, x: f64) -> (f64, f64) {
        let (f, s) = (self.parent.cdf(x), self.parent.sf(x));
        let lower = binomial_terms(self.n, self.k, self.n, f, s).clamp(0.0, 1.0);
        let upper = binomial_terms(self.n, 0, self.k - 1, f, s).clamp(0.0, 1.0);
        if lower <= upper {
            (lower, 1.0 - lower)
        } else {
            (1.0 - upper, upper)
        }
    }

    /// Right-hand side of the recurrence
    /// `F_k = sum_{j=k}^{k+r} C(n,j) F^j (1-F)^(n-j) + F_{k+r+1}`, with `F_{n+1} = 0`.
    pub fn cdf_by_recurrence(&self, r: u32, x: f64) -> Result<f64> {
        if self.k + r > self.n {
            return Err(domain(format!(
                "recurrence depth r={r} exceeds n-k={}",
                self.n - self.k
            )));
        }
        let (f, s) = (self.parent.cdf(x), self.parent.sf(x));
        let head = binomial_terms(self.n, self.k, self.k + r, f, s);
        let next = self.k + r + 1;
        let tail = if next > self.n {
            0.0
        } else {
            Self { k: next, ..*self }.cdf(x)
        };
        Ok(head + tail)
    }

    /// One draw: parent quantile of the uniform order statistic
    /// `U_{k,n} ~ Beta(k, n-k+1)`, built as `G_k / (G_k + G_{n-k+1})` from gamma variates.
    #[inline]
    pub fn sample_one(&self, rng: &mut RngStream) -> f64 {
        let a = gamma_integer(self.k, rng);
        let b = gamma_integer(self.n - self.k + 1, rng);
        let total = a + b;
        self.parent.quantile_pq(a / total, b / total)
    }

    pub fn sample(&self, rng: &mut RngStream, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }

    /// Reference sampler: draw n parent values and select the k-th smallest.
    pub fn sample_by_sorting(&self, rng: &mut RngStream, count: usize) -> Vec<f64> {
        let mut block = vec![0.0; self.n as usize];
        (0..count)
            .map(|_| {
                block
                    .iter_mut()
                    .for_each(|v| *v = self.parent.sample_one(rng));
                let (_, kth, _) =
                    block.select_nth_unstable_by((self.k - 1) as usize, f64::total_cmp);
                *kth
            })
            .collect()
    }
}

/// Gamma(shape, 1) draw for a positive integer shape.
#[inline]
fn gamma_integer(shape: u32, rng: &mut RngStream) -> f64 {
    if shape <= 16 {
        let mut prod = rng.uniform();
        for _ in 1..shape {
            prod *= rng.uniform();
        }
        -prod.ln()
    } else {
        Gamma::new(shape as f64, 1.0)
            .expect("positive shape")
            .sample(rng)
    }
}
