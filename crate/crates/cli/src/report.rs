use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use logshift::cf::CfGrid;
use logshift::diagnostics::GofResult;
use logshift::distributions::Distribution;
use logshift::identity::{FamilyParams, FamilyVerdict, IdentitySpec, Verdict, VerificationReport};
use logshift::two_sample::TwoSampleTest;
use serde::Serialize;

use crate::args::RunArgs;
use crate::CliError;

#[derive(Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

impl Provenance {
    pub fn new(command: &'static str, canonical: bool) -> Self {
        let timestamp_unix = (!canonical).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            tool: "logshift",
            version: env!("CARGO_PKG_VERSION"),
            core_version: logshift::VERSION,
            command,
            timestamp_unix,
        }
    }
}

#[derive(Serialize)]
pub struct RunSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selector: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<u32>,
    pub parent: Distribution,
    pub sample_size: usize,
    pub alpha: f64,
    pub seed: u64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub test: TwoSampleTest,
}

impl RunSettings {
    pub fn new(
        run: &RunArgs,
        parent: Distribution,
        selector: Option<String>,
        max_n: Option<u32>,
    ) -> Self {
        Self {
            selector,
            max_n,
            parent,
            sample_size: run.sample_size,
            alpha: run.alpha,
            seed: run.seed.seed,
            t_min: run.grid.t_min,
            t_max: run.grid.t_max,
            t_points: run.grid.t_points,
            test: run.test.into(),
        }
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub config: RunSettings,
    /// False when passing is only a necessary condition, e.g. a single-k `theorem1` run with r >= 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterization_level: Option<bool>,
    pub reports: Vec<VerificationReport>,
    pub family: FamilyVerdict,
    pub verdict: Verdict,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            let _ = writeln!(s, "{}", r.summary());
        }
        let f = &self.family;
        let _ = writeln!(
            s,
            "family: {} tests, bonferroni alpha {:.3e}, min p {:.4}, unadjusted rejections {}, cf failures {} -> {}",
            f.tests, f.adjusted_alpha, f.min_p_value, f.unadjusted_rejections, f.cf_failures, f.verdict
        );
        if self.characterization_level == Some(false) {
            let _ = writeln!(
                s,
                "note: necessary condition only, not characterization-level evidence"
            );
        }
        let _ = writeln!(s, "verdict: {}", self.verdict);
        s
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Runtime(e.to_string());
        w.write_record([
            "identity",
            "statement",
            "parent",
            "cf_max_abs_diff",
            "ks_statistic",
            "ks_p_value",
            "cvm_p_value",
            "sample_size",
            "seed",
            "verdict",
        ])
        .map_err(err)?;
        for r in &self.reports {
            w.write_record([
                r.identity.label.clone(),
                r.statement.clone(),
                r.parent.to_string(),
                r.cf_max_abs_diff.map(|d| d.to_string()).unwrap_or_default(),
                r.ks_statistic.to_string(),
                r.ks_p_value.to_string(),
                r.cvm_p_value.map(|p| p.to_string()).unwrap_or_default(),
                r.sample_size.to_string(),
                r.seed.to_string(),
                r.verdict.to_string(),
            ])
            .map_err(err)?;
        }
        w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
    }
}

#[derive(Serialize)]
pub struct GofReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub data: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<String>,
    pub alpha: f64,
    pub result: GofResult,
    pub verdict: Verdict,
}

impl GofReport {
    pub fn to_text(&self) -> String {
        let r = &self.result;
        format!(
            "gof {} on {} (N={}, rounds={}, centered={}): D={:.5} p={:.4} ({} null replicates, seed {}) -> {}\n",
            r.identity_used,
            self.data,
            r.sample_size,
            r.reconstruction_rounds,
            r.centered,
            r.statistic,
            r.p_value,
            r.null_replicates,
            r.seed,
            self.verdict
        )
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let r = &self.result;
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Runtime(e.to_string());
        w.write_record([
            "identity",
            "statistic",
            "p_value",
            "null_replicates",
            "sample_size",
            "seed",
            "alpha",
            "verdict",
        ])
        .map_err(err)?;
        w.write_record([
            r.identity_used.clone(),
            r.statistic.to_string(),
            r.p_value.to_string(),
            r.null_replicates.to_string(),
            r.sample_size.to_string(),
            r.seed.to_string(),
            self.alpha.to_string(),
            self.verdict.to_string(),
        ])
        .map_err(err)?;
        w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
    }
}

#[derive(Serialize)]
pub struct CfRow {
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl CfRow {
    pub fn from_grid(grid: &CfGrid) -> Vec<Self> {
        grid.t_values()
            .iter()
            .zip(grid.cf_values())
            .zip(grid.abs_error_bound())
            .map(|((&t, v), &err)| Self {
                t,
                re: v.re,
                im: v.im,
                err,
            })
            .collect()
    }
}

#[derive(Serialize)]
pub struct CfTableReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub parent: Distribution,
    pub n: u32,
    pub k: u32,
    pub method: &'static str,
    pub rows: Vec<CfRow>,
}

impl CfTableReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# cf of X_{{{},{}}}, parent {} ({})\n",
            self.k, self.n, self.parent, self.method
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>10.4} {:>24.16e} {:>24.16e} {:>10.2e}",
                r.t, r.re, r.im, r.err
            );
        }
        s
    }
}

#[derive(Serialize)]
pub struct CatalogEntry {
    pub selector: String,
    pub statement: String,
    pub family_params: FamilyParams,
}

impl From<&IdentitySpec> for CatalogEntry {
    fn from(id: &IdentitySpec) -> Self {
        Self {
            selector: id.label.clone(),
            statement: id.to_string(),
            family_params: id.family_params,
        }
    }
}

pub fn catalog_csv(entries: &[CatalogEntry]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Runtime(e.to_string());
    w.write_record(["selector", "statement"]).map_err(err)?;
    for e in entries {
        w.write_record([e.selector.as_str(), e.statement.as_str()])
            .map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
}
