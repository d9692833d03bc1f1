mod args;
mod data;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use logshift::cf::{exact_order_stat_cf, uniform_points, CfGrid};
use logshift::diagnostics::{gof_test, GofConfig};
use logshift::distributions::{Distribution, OrderStatistic};
use logshift::identity::{catalog, family_verdict, parse_selector, verify, IdentitySpec, Verdict};
use logshift::VerificationConfig;

use args::{
    CatalogArgs, CfMethod, CfTableArgs, Cli, Command, Format, GofArgs, OutputArgs, RunArgs,
};
use report::{
    CatalogEntry, CfRow, CfTableReport, GofReport, Provenance, RunSettings, VerifyReport,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, configuration or input; exit status 2.
    Usage(String),
    /// Numerical or I/O failure while running; also exit status 2.
    Runtime(String),
}

impl From<logshift::Error> for CliError {
    fn from(e: logshift::Error) -> Self {
        match e {
            logshift::Error::Domain(_)
            | logshift::Error::Parse { .. }
            | logshift::Error::InsufficientData { .. }
            | logshift::Error::UnsupportedParent(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

/// Whether the requested checks all passed.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(CliError::Usage(msg)) | Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Verify(a) => {
            let selection = parse_selector(&a.identity)?;
            let parent = parse_parent(&a.run.parent)?;
            let ids = selection
                .identities
                .iter()
                .map(|id| IdentitySpec::with_parent(id.family_params, parent))
                .collect::<logshift::Result<Vec<_>>>()?;
            let settings = RunSettings::new(&a.run, parent, Some(selection.selector.clone()), None);
            run_verification(
                "verify",
                ids,
                &a.run,
                settings,
                Some(selection.characterization_level),
            )
        }
        Command::VerifyAll(a) => {
            if a.max_n == 0 {
                return Err(CliError::Usage("--max-n must be at least 1".into()));
            }
            let parent = parse_parent(&a.run.parent)?;
            let ids = catalog(a.max_n)
                .iter()
                .map(|id| id.reparented(parent))
                .collect();
            let settings = RunSettings::new(&a.run, parent, None, Some(a.max_n));
            run_verification("verify-all", ids, &a.run, settings, None)
        }
        Command::CfTable(a) => cf_table(a),
        Command::Gof(a) => gof(a),
        Command::Catalog(a) => list_catalog(a),
    }
}

fn parse_parent(s: &str) -> Result<Distribution, CliError> {
    Ok(s.parse::<Distribution>()?)
}

fn run_verification(
    command: &'static str,
    ids: Vec<IdentitySpec>,
    run: &RunArgs,
    settings: RunSettings,
    characterization_level: Option<bool>,
) -> Result<Outcome, CliError> {
    let config = VerificationConfig {
        sample_size: run.sample_size,
        alpha: run.alpha,
        t_grid: uniform_points(run.grid.t_min, run.grid.t_max, run.grid.t_points)?,
        seed: run.seed.seed,
        test: run.test.into(),
        ..Default::default()
    };
    config.validate()?;
    let reports = ids
        .iter()
        .map(|id| verify(id, &config))
        .collect::<logshift::Result<Vec<_>>>()?;
    let family = family_verdict(&reports, run.alpha);
    let verdict = family.verdict;
    let report = VerifyReport {
        provenance: Provenance::new(command, run.out.canonical),
        config: settings,
        characterization_level,
        reports,
        family,
        verdict,
    };
    let bytes = match run.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Text => report.to_text().into_bytes(),
        Format::Csv => report.to_csv()?,
    };
    emit(&run.out, &bytes)?;
    Ok(if verdict == Verdict::Consistent {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn cf_table(a: CfTableArgs) -> Result<Outcome, CliError> {
    let parent = parse_parent(&a.parent)?;
    let spec = OrderStatistic::new(parent, a.n, a.k)?;
    let t = uniform_points(a.grid.t_min, a.grid.t_max, a.grid.t_points)?;
    let grid = match a.method {
        CfMethod::Exact => {
            let bound = (2 * a.n + 8) as f64 * f64::EPSILON;
            CfGrid::from_fn(t, |ti| Ok((exact_order_stat_cf(&spec, ti)?, bound)))?
        }
        CfMethod::Numerical => {
            CfGrid::numerical(&spec, a.grid.t_min, a.grid.t_max, a.grid.t_points, a.tol)?
        }
    };
    let bytes = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            grid.write_csv(&mut buf)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            buf
        }
        format => {
            let report = CfTableReport {
                provenance: Provenance::new("cf-table", a.out.canonical),
                parent,
                n: a.n,
                k: a.k,
                method: match a.method {
                    CfMethod::Exact => "exact",
                    CfMethod::Numerical => "numerical",
                },
                rows: CfRow::from_grid(&grid),
            };
            if format == Format::Json {
                to_json(&report)?
            } else {
                report.to_text().into_bytes()
            }
        }
    };
    emit(&a.out, &bytes)?;
    Ok(Outcome::Pass)
}

fn gof(a: GofArgs) -> Result<Outcome, CliError> {
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(CliError::Usage(format!("alpha {} outside (0, 1)", a.alpha)));
    }
    let values = match &a.column {
        Some(column) => data::read_column_csv(&a.data, column)?,
        None => data::read_column_text(&a.data)?,
    };
    let config = GofConfig {
        n: a.n,
        k: a.k,
        null_replicates: a.null_replicates,
        reconstruction_rounds: a.rounds,
        seed: a.seed.seed,
        center_median: a.center_median,
    };
    let result = gof_test(&values, &config)?;
    let verdict = if result.p_value > a.alpha {
        Verdict::Consistent
    } else {
        Verdict::Rejected
    };
    let report = GofReport {
        provenance: Provenance::new("gof", a.out.canonical),
        data: a.data.display().to_string(),
        column: a.column.clone(),
        alpha: a.alpha,
        result,
        verdict,
    };
    let bytes = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Text => report.to_text().into_bytes(),
        Format::Csv => report.to_csv()?,
    };
    emit(&a.out, &bytes)?;
    Ok(if verdict == Verdict::Consistent {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn list_catalog(a: CatalogArgs) -> Result<Outcome, CliError> {
    if a.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let entries: Vec<CatalogEntry> = catalog(a.max_n).iter().map(CatalogEntry::from).collect();
    let bytes = match a.out.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&entries)?,
        Format::Csv => report::catalog_csv(&entries)?,
        Format::Text => entries
            .iter()
            .map(|e| format!("{:<28} {}\n", e.selector, e.statement))
            .collect::<String>()
            .into_bytes(),
    };
    emit(&a.out, &bytes)?;
    Ok(Outcome::Pass)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes to stdout, or atomically replaces the output file via a sibling temp file.
fn emit(out: &OutputArgs, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Runtime(e.to_string());
    match &out.output {
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(bytes).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(io),
            }
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => std::path::Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::Usage(format!("cannot write to {}: {e}", dir.display())))?;
            tmp.write_all(bytes).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}
