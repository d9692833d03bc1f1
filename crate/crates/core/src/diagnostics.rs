//! Characterizing functionals of the logistic law and a goodness-of-fit
//! diagnostic built on the shift identity
//! `X =d X_{k,n} + sum_{j=1}^{n-k} E'_j/j - sum_{j=1}^{k-1} E''_j/j`.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution, OrderStatistic};
use crate::error::{domain, Error, Result};
use crate::identity::FamilyParams;
use crate::rng::RngStream;
use crate::two_sample::{ks_statistic_sorted, sort_sample};

pub const MIN_GOF_SAMPLE: usize = 100;
pub const MIN_NULL_REPLICATES: usize = 199;

/// `w(x) = F'(x) / (F(x) (1 - F(x)))`; identically 1 for the standard logistic.
pub fn w_functional(d: &Distribution, x: f64) -> Result<f64> {
    let f = d.cdf(x);
    let s = d.sf(x);
    if f <= 1e-15 || s <= 1e-15 {
        return Err(domain(format!(
            "F({x}) = {f} is outside the support interior"
        )));
    }
    Ok(d.pdf(x) / (f * s))
}

/// `F_k - F_{k+1} - F'_k / k - F'_{k+1} / (n - k)` at `x`; vanishes for every
/// x exactly when `F' = F (1 - F)`.
pub fn adjacent_functional_residual(parent: &Distribution, n: u32, k: u32, x: f64) -> Result<f64> {
    if !(1 <= k && k < n) {
        return Err(domain(format!("need 1 <= k <= n-1, got k={k} n={n}")));
    }
    let lower = OrderStatistic::new(*parent, n, k)?;
    let upper = OrderStatistic::new(*parent, n, k + 1)?;
    Ok(lower.cdf(x) - upper.cdf(x) - lower.pdf(x) / k as f64 - upper.pdf(x) / (n - k) as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofConfig {
    pub n: u32,
    pub k: u32,
    pub null_replicates: usize,
    /// Independent shuffles whose reconstructed samples are pooled.
    pub reconstruction_rounds: usize,
    pub seed: u64,
    /// Subtract the sample median before testing (applied to null replicates too).
    pub center_median: bool,
}

impl Default for GofConfig {
    fn default() -> Self {
        Self {
            n: 3,
            k: 2,
            null_replicates: MIN_NULL_REPLICATES,
            reconstruction_rounds: 10,
            seed: 0,
            center_median: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub p_value: f64,
    pub null_replicates: usize,
    pub identity_used: String,
    pub sample_size: usize,
    pub seed: u64,
    pub reconstruction_rounds: usize,
    pub centered: bool,
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let m = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[m]
    } else {
        0.5 * (sorted[m - 1] + sorted[m])
    }
}

/// KS distance between the data and draws reconstructed from disjoint
/// size-n blocks of it: each block contributes its k-th smallest value
/// plus freshly drawn exponential shifts.
fn reconstruction_statistic(data: &[f64], config: &GofConfig, rng: &RngStream) -> f64 {
    let mut sorted = data.to_vec();
    sort_sample(&mut sorted);
    if config.center_median {
        let med = median_of_sorted(&sorted);
        sorted.iter_mut().for_each(|x| *x -= med);
    }
    let (n, k) = (config.n as usize, config.k as usize);
    let blocks = sorted.len() / n;
    let mut pooled = Vec::with_capacity(blocks * config.reconstruction_rounds);
    let mut shuffled = sorted.clone();
    let mut block = vec![0.0; n];
    for round in 0..config.reconstruction_rounds {
        let mut r = rng.split(round as u64);
        shuffled.shuffle(&mut r);
        for chunk in shuffled.chunks_exact(n) {
            block.copy_from_slice(chunk);
            let (_, kth, _) = block.select_nth_unstable_by(k - 1, f64::total_cmp);
            let mut v = *kth;
            for j in 1..=n - k {
                v += r.exp1() / j as f64;
            }
            for j in 1..k {
                v -= r.exp1() / j as f64;
            }
            pooled.push(v);
        }
    }
    sort_sample(&mut pooled);
    ks_statistic_sorted(&pooled, &sorted)
}

/// Characterization-based logistic goodness-of-fit test with a Monte Carlo
/// p-value under the standard logistic null. Data should be centred so that
/// the null has median zero, or `center_median` set.
pub fn gof_test(data: &[f64], config: &GofConfig) -> Result<GofResult> {
    if data.len() < MIN_GOF_SAMPLE {
        return Err(Error::InsufficientData {
            required: MIN_GOF_SAMPLE,
            got: data.len(),
        });
    }
    if !(1 <= config.k && config.k <= config.n) {
        return Err(domain(format!(
            "rank k={} outside [1, n={}]",
            config.k, config.n
        )));
    }
    if config.n as usize > data.len() {
        return Err(domain("block size n exceeds the data size"));
    }
    if config.null_replicates < MIN_NULL_REPLICATES {
        return Err(domain(format!(
            "need at least {MIN_NULL_REPLICATES} null replicates, got {}",
            config.null_replicates
        )));
    }
    if config.reconstruction_rounds == 0 {
        return Err(domain("reconstruction_rounds must be at least 1"));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(domain("data contains non-finite values"));
    }
    let root = RngStream::new(config.seed);
    let observed = reconstruction_statistic(data, config, &root.split(0));
    let null_root = root.split(1);
    let logistic = Distribution::STANDARD_LOGISTIC;
    let exceed = (0..config.null_replicates)
        .into_par_iter()
        .filter(|&i| {
            let rep = null_root.split(i as u64);
            let sample = logistic.sample(&mut rep.split(0), data.len());
            reconstruction_statistic(&sample, config, &rep.split(1)) >= observed
        })
        .count();
    Ok(GofResult {
        statistic: observed,
        p_value: (1 + exceed) as f64 / (config.null_replicates + 1) as f64,
        null_replicates: config.null_replicates,
        identity_used: FamilyParams::Lemma1ii {
            k: config.k,
            n: config.n,
        }
        .selector(),
        sample_size: data.len(),
        seed: config.seed,
        reconstruction_rounds: config.reconstruction_rounds,
        centered: config.center_median,
    })
}
