//! Rendering of run results. Every renderer is a pure function of the job
//! and the payload, so repeated runs produce identical bytes.

use std::fmt::Write as _;

use quantum_integral::reference::CheckReport;
use serde::Serialize;

use crate::job::{Format, JobSpec};
use quantum_integral::coin::RatioRow;

use crate::run::{Coverage, FtcRow, IntegralResult, Payload};

pub const VERSION: &str = concat!("qint ", env!("CARGO_PKG_VERSION"));

/// The main document plus an optional human-readable summary meant for
/// stderr (used by `verify` when stdout carries JSON or CSV).
pub struct Rendered {
    pub document: String,
    pub summary: Option<String>,
}

#[derive(Serialize)]
struct Document<'a> {
    version: &'a str,
    job: &'a JobSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<&'a IntegralResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<Rows<'a>>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Rows<'a> {
    Coin(&'a [RatioRow]),
    Ftc(&'a [FtcRow]),
}

pub fn render(job: &JobSpec, payload: &Payload) -> Rendered {
    let verify_table =
        |reports: &[CheckReport], coverage: &Coverage| verify_text(reports, coverage);
    match (job.format, payload) {
        (Format::Json, Payload::Verify { reports, coverage }) => Rendered {
            document: pretty(&reports),
            summary: Some(verify_table(reports, coverage)),
        },
        (Format::Csv, Payload::Verify { reports, coverage }) => Rendered {
            document: verify_csv(reports),
            summary: Some(verify_table(reports, coverage)),
        },
        (Format::Text, Payload::Verify { reports, coverage }) => Rendered {
            document: verify_table(reports, coverage),
            summary: None,
        },
        (Format::Json, other) => {
            let (result, rows) = match other {
                Payload::Integral(r) => (Some(r), None),
                Payload::Coin(rows) => (None, Some(Rows::Coin(rows))),
                Payload::Ftc(rows) => (None, Some(Rows::Ftc(rows))),
                Payload::Verify { .. } => unreachable!(),
            };
            let doc = Document {
                version: VERSION,
                job,
                result,
                rows,
            };
            Rendered {
                document: pretty(&doc),
                summary: None,
            }
        }
        (Format::Csv, other) => Rendered {
            document: csv_document(other),
            summary: None,
        },
        (Format::Text, other) => Rendered {
            document: text_document(other),
            summary: None,
        },
    }
}

fn pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn csv_document(payload: &Payload) -> String {
    match payload {
        Payload::Integral(r) => csv_table(
            &[
                "measure",
                "fn",
                "from",
                "to",
                "center",
                "value",
                "error_bound",
                "evaluations",
            ],
            [vec![
                r.measure.clone(),
                r.function.clone(),
                r.from.to_string(),
                r.to.to_string(),
                r.center.to_string(),
                r.value.to_string(),
                r.error_bound.to_string(),
                r.evaluations.to_string(),
            ]],
        ),
        Payload::Coin(rows) => csv_table(
            &["n", "a_n", "2a_n/n"],
            rows.iter()
                .map(|r| vec![r.n.to_string(), r.a_n_string(), r.ratio.clone()]),
        ),
        Payload::Ftc(rows) => csv_table(
            &[
                "b",
                "half_second_difference",
                "f_b",
                "difference",
                "quantum",
                "double_integral",
            ],
            rows.iter().map(|r| {
                [
                    r.b,
                    r.half_second_difference,
                    r.f_b,
                    r.difference,
                    r.quantum,
                    r.double_integral,
                ]
                .iter()
                .map(f64::to_string)
                .collect()
            }),
        ),
        Payload::Verify { reports, .. } => verify_csv(reports),
    }
}

fn verify_csv(reports: &[CheckReport]) -> String {
    csv_table(
        &[
            "id",
            "a",
            "b",
            "n",
            "center",
            "engine",
            "closed_form",
            "abs_diff",
            "tolerance",
            "pass",
            "expectation",
            "as_expected",
        ],
        reports.iter().map(|r| {
            vec![
                r.id.clone(),
                r.params.a.to_string(),
                r.params.b.to_string(),
                r.params.n.to_string(),
                r.params.center.to_string(),
                r.engine.to_string(),
                r.closed_form.to_string(),
                r.abs_diff.to_string(),
                r.tolerance.to_string(),
                r.pass.to_string(),
                expectation_name(r),
                r.as_expected().to_string(),
            ]
        }),
    )
}

fn expectation_name(r: &CheckReport) -> String {
    serde_json::to_value(r.expectation)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn text_document(payload: &Payload) -> String {
    let mut s = String::new();
    match payload {
        Payload::Integral(r) => {
            let _ = writeln!(s, "measure      {}", r.measure);
            let _ = writeln!(s, "fn           {}", r.function);
            let _ = writeln!(s, "range        [{}, {})", r.from, r.to);
            let _ = writeln!(s, "center       {}", r.center);
            let _ = writeln!(s, "value        {}", r.value);
            let _ = writeln!(s, "error bound  {:e}", r.error_bound);
            let _ = writeln!(s, "evaluations  {}", r.evaluations);
        }
        Payload::Coin(rows) => {
            let width = rows
                .iter()
                .map(|r| r.a_n_string().len())
                .max()
                .unwrap_or(3)
                .max(3);
            let _ = writeln!(s, "{:>6}  {:<width$}  2a_n/n", "n", "a_n");
            for r in rows {
                let _ = writeln!(s, "{:>6}  {:<width$}  {}", r.n, r.a_n_string(), r.ratio);
            }
        }
        Payload::Ftc(rows) => {
            let _ = writeln!(
                s,
                "{:>6}  {:>14}  {:>14}  {:>11}  {:>14}  {:>14}",
                "b", "half G''", "f(b)", "difference", "int_0^b f", "2 double int"
            );
            for r in rows {
                let _ = writeln!(
                    s,
                    "{:>6}  {:>14.10}  {:>14.10}  {:>11.3e}  {:>14.10}  {:>14.10}",
                    r.b,
                    r.half_second_difference,
                    r.f_b,
                    r.difference,
                    r.quantum,
                    r.double_integral
                );
            }
        }
        Payload::Verify { reports, coverage } => s = verify_text(reports, coverage),
    }
    s
}

fn verify_text(reports: &[CheckReport], coverage: &Coverage) -> String {
    let mut s = String::new();
    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let _ = writeln!(
        s,
        "{:<width$}  {:>16}  {:>16}  {:>9}  {:>7}  {:<8}  status",
        "id", "engine", "reference", "abs diff", "tol", "expect"
    );
    for r in reports {
        let status = match (r.as_expected(), r.pass) {
            (true, true) => "ok",
            (true, false) => "ok (expected mismatch)",
            (false, true) => "UNEXPECTED PASS",
            (false, false) => "FAILED",
        };
        let _ = writeln!(
            s,
            "{:<width$}  {:>16.12}  {:>16.12}  {:>9.2e}  {:>7.0e}  {:<8}  {status}",
            r.id,
            r.engine,
            r.closed_form,
            r.abs_diff,
            r.tolerance,
            expectation_name(r)
        );
    }
    let unexpected = reports.iter().filter(|r| !r.as_expected()).count();
    let _ = writeln!(
        s,
        "catalog coverage: {}/{} entries",
        coverage.covered, coverage.catalog
    );
    let _ = writeln!(
        s,
        "checks: {} run, {} as expected, {} unexpected",
        reports.len(),
        reports.len() - unexpected,
        unexpected
    );
    s
}
