//! `gwcalc`: command-line front end to `gw-core`.
//!
//! Exit codes: 0 success, 1 a comparison came out unequal, 2 bad parameters
//! or syntax, 3 unsupported model or configuration. Errors are one line on
//! standard error, `gwcalc: <kind>: <message>`.

mod job;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use gw_core::cohmodel::make_model;
use gw_core::gwengine::gw0_grassmannian_3pt;
use gw_core::persist::{self, CACHE_FILE_NAME};
use gw_core::quotientcmp::make_family;
use gw_core::schubert::dlambda;
use gw_core::{BasisClass, ComparisonReport, DimensionLedger, GwEngine, MemoCache, ModelKind, QuotientFamily, Rational};
use serde_json::{json, Value};
use thiserror::Error;

pub use job::{insertion_list, parse_insertions, Format, Job, JobSpec, Parsed};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] gw_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Inequality(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(gw_core::Error::UnsupportedModel(_) | gw_core::Error::UnsupportedConfiguration(_)) => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Inequality(_) => 1,
        }
    }

    fn message(&self) -> String {
        use gw_core::Error::*;
        match self {
            CliError::Core(Parameter(m) | UnsupportedModel(m) | UnsupportedConfiguration(m) | Parse(m)) => m.clone(),
            other => other.to_string(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(gw_core::Error::Parameter(_)) => "parameter",
            CliError::Core(gw_core::Error::Parse(_)) => "parse",
            CliError::Core(_) => "unsupported",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Inequality(_) => "inequality",
        }
    }
}

/// What a job produced: the JSON payload and the CSV table, plus an
/// inequality to report after the output is written.
struct Outcome {
    payload: (&'static str, Value),
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    unequal: Option<String>,
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let spec = match JobSpec::parse(argv) {
        Ok(Parsed::Job(spec)) => spec,
        Ok(Parsed::Info(text)) => {
            let _ = write!(out, "{text}");
            return 0;
        }
        Err(e) => return report_error(err, &e),
    };
    let cache_path = std::env::var_os("GW_CACHE_DIR").map(|d| PathBuf::from(d).join(CACHE_FILE_NAME));
    let engine = GwEngine::new();
    if let Some(path) = &cache_path {
        match persist::read_cache(path) {
            Ok(entries) => engine.preload(entries),
            Err(e) => warn(err, &format!("ignoring cache {}: {e}", path.display())),
        }
    }

    let start = Instant::now();
    let outcome = match execute(&spec.job, &engine) {
        Ok(o) => o,
        Err(e) => return report_error(err, &e),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    if let Some(path) = &cache_path {
        if let Err(e) = persist::write_cache(path, &engine.cache().entries()) {
            warn(err, &format!("could not save cache {}: {e}", path.display()));
        }
    }

    let text = match spec.format {
        Format::Json => {
            let mut inputs = serde_json::Map::new();
            for (k, v) in spec.job.fields() {
                inputs.insert(k.to_string(), Value::String(v));
            }
            let timing = if spec.timing { json!(elapsed) } else { Value::Null };
            let mut doc = serde_json::Map::new();
            doc.insert("command".into(), json!(spec.job.name()));
            doc.insert("inputs".into(), Value::Object(inputs));
            doc.insert(outcome.payload.0.into(), outcome.payload.1);
            doc.insert("timing_ms".into(), timing);
            serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialise") + "\n"
        }
        Format::Csv => match csv_text(&outcome.header, &outcome.rows) {
            Ok(t) => t,
            Err(e) => return report_error(err, &e),
        },
    };
    let written = match &spec.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    };
    if let Err(e) = written {
        return report_error(err, &e);
    }
    match outcome.unequal {
        Some(msg) => report_error(err, &CliError::Inequality(msg)),
        None => 0,
    }
}

fn report_error(err: &mut dyn Write, e: &CliError) -> i32 {
    let msg = e.message().replace(['\n', '\r'], " ");
    let _ = writeln!(err, "gwcalc: {}: {msg}", e.kind());
    e.exit_code()
}

fn warn(err: &mut dyn Write, msg: &str) {
    let _ = writeln!(err, "gwcalc: warning: {}", msg.replace(['\n', '\r'], " "));
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn execute(job: &Job, engine: &GwEngine) -> Result<Outcome, CliError> {
    match job {
        Job::Compute { model, degree, insertions } => {
            let value = compute(engine, *model, degree, insertions)?;
            Ok(Outcome {
                payload: ("value", json!(value.to_string())),
                header: vec!["model", "degree", "insertions", "value"],
                rows: vec![vec![model.to_string(), degree.to_string(), insertion_list(insertions), value.to_string()]],
                unequal: None,
            })
        }
        Job::Compare { family, degree, insertions, slot } => {
            let fam = make_family(*family)?;
            let report = fam.verify_comparison_at(engine, *degree, insertions, *slot)?;
            let unequal = (!report.equal).then(|| {
                format!("{family} d={degree}: lhs {} != rhs {}", report.lhs, report.rhs)
            });
            Ok(Outcome {
                payload: ("report", report_json(&report)),
                header: TABLE_HEADER.to_vec(),
                rows: vec![table_row(&report)],
                unequal,
            })
        }
        Job::Dlambda { lambda, m, n } => {
            let d = dlambda(lambda, *m, *n)?;
            Ok(Outcome {
                payload: ("value", json!(d.value.to_string())),
                header: vec!["lambda", "m", "n", "value"],
                rows: vec![vec![lambda.to_string(), m.to_string(), n.to_string(), d.value.to_string()]],
                unequal: None,
            })
        }
        Job::Table { family, max_degree, max_points } => {
            let fam = make_family(*family)?;
            let reports = sweep(engine, &fam, *max_degree, *max_points)?;
            let bad = reports.iter().filter(|r| !r.equal).count();
            let unequal = (bad > 0).then(|| format!("{family}: {bad} of {} rows unequal", reports.len()));
            Ok(Outcome {
                payload: ("report", json!({ "rows": reports.iter().map(report_json).collect::<Vec<_>>() })),
                header: TABLE_HEADER.to_vec(),
                rows: reports.iter().map(table_row).collect(),
                unequal,
            })
        }
        Job::Ledger { family, genus, points, degree } => {
            let ledger = make_family(*family)?.dimension_ledger(*genus, *points, *degree);
            let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
            Ok(Outcome {
                payload: ("report", ledger_json(&ledger)),
                header: vec![
                    "family",
                    "genus",
                    "points",
                    "degree",
                    "d_hat",
                    "d_minus_dim_g",
                    "gap",
                    "expected_gap",
                    "real_dim_2d",
                ],
                rows: vec![vec![
                    family.to_string(),
                    genus.to_string(),
                    points.to_string(),
                    degree.to_string(),
                    ledger.d_hat.to_string(),
                    ledger.d_minus_dim_g.to_string(),
                    ledger.gap.to_string(),
                    ledger.expected_gap.to_string(),
                    opt(ledger.real_dim_2d),
                ]],
                unequal: None,
            })
        }
    }
}

fn compute(
    engine: &GwEngine,
    model: ModelKind,
    degree: &gw_core::CurveClass,
    insertions: &[BasisClass],
) -> Result<Rational, CliError> {
    let ring = make_model(model)?;
    if let (ModelKind::Grassmannian(k, m), [BasisClass::Schubert(a), BasisClass::Schubert(b), BasisClass::Schubert(c)]) =
        (model, insertions)
    {
        return Ok(gw0_grassmannian_3pt(k, m, a, b, c, degree.components()[0])?);
    }
    Ok(engine.gw0_basis(&ring, degree, insertions)?)
}

const TABLE_HEADER: [&str; 7] = ["family", "d", "k", "insertions", "lhs", "rhs", "equal"];

fn table_row(r: &ComparisonReport) -> Vec<String> {
    vec![
        r.family.to_string(),
        r.degree.to_string(),
        r.insertions.len().to_string(),
        insertion_list(&r.insertions),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.equal.to_string(),
    ]
}

fn ledger_json(l: &DimensionLedger) -> Value {
    json!({
        "genus": l.genus,
        "points": l.points,
        "degree": l.degree,
        "d_hat": l.d_hat,
        "d_minus_dim_g": l.d_minus_dim_g,
        "gap": l.gap,
        "expected_gap": l.expected_gap,
        "gap_ok": l.gap_ok(),
        "real_dim_2d": l.real_dim_2d,
    })
}

fn report_json(r: &ComparisonReport) -> Value {
    json!({
        "family": r.family.to_string(),
        "degree": r.degree,
        "insertions": r.insertions.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "slot": r.slot,
        "lhs": r.lhs.to_string(),
        "rhs": r.rhs.to_string(),
        "equal": r.equal,
        "lhs_dim_ok": r.lhs_dim_ok,
        "rhs_dim_ok": r.rhs_dim_ok,
        "ledger": ledger_json(&r.ledger),
        "warnings": r.warnings,
    })
}

/// All insertion multisets (no fundamental class, at most `max_points`)
/// passing both dimension checks, for degrees `1..=max_degree`.
/// Configurations the comparison does not support are skipped.
fn sweep(
    engine: &GwEngine,
    fam: &QuotientFamily,
    max_degree: u32,
    max_points: u32,
) -> Result<Vec<ComparisonReport>, CliError> {
    let classes: Vec<BasisClass> =
        fam.downstairs.basis().iter().filter(|c| c.codim() > 0).cloned().collect();
    let mut reports = Vec::new();
    for d in 1..=max_degree {
        let curve_hat = fam.pushforward_class(d);
        for k in 1..=max_points {
            let target = fam.downstairs.expected_dim(0, k, &curve_hat);
            let upstairs = fam.upstairs.expected_dim(0, k, &gw_core::CurveClass::degree(d)) - fam.dim_g as i64;
            if target != upstairs || target < 0 {
                continue;
            }
            for ins in multisets(&classes, k as usize) {
                if ins.iter().map(|c| c.codim() as i64).sum::<i64>() != target {
                    continue;
                }
                match fam.verify_comparison(engine, d, &ins) {
                    Ok(r) => reports.push(r),
                    Err(gw_core::Error::UnsupportedConfiguration(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(reports)
}

fn multisets(classes: &[BasisClass], k: usize) -> Vec<Vec<BasisClass>> {
    fn go(classes: &[BasisClass], from: usize, k: usize, cur: &mut Vec<BasisClass>, out: &mut Vec<Vec<BasisClass>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..classes.len() {
            cur.push(classes[i].clone());
            go(classes, i, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(classes, 0, k, &mut Vec::new(), &mut out);
    out
}
