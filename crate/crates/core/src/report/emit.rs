//! Serialization of a [`RunReport`] as JSON, CSV or Markdown. Output is a
//! pure function of the report: no timestamps, fixed key order, floats
//! rounded to [`EMIT_SIG_DIGITS`] significant digits.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

use super::{OutputFormat, RunReport};
use crate::bounds::{BoundEntry, BoundKind, BoundReport, CapacityLevel};

pub const EMIT_SIG_DIGITS: usize = 12;

/// `x` rounded to [`EMIT_SIG_DIGITS`] significant digits; non-finite values
/// pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", EMIT_SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every float in a JSON tree; integers are left alone.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| Number::from_f64(round_sig(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn json_value(report: &RunReport) -> Value {
    let mut top = Map::new();
    top.insert("tool".into(), Value::String("assisted-capacity".into()));
    if let Value::Object(body) = serde_json::to_value(report).unwrap_or(Value::Null) {
        top.extend(body);
    }
    round_value(Value::Object(top))
}

fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r.is_finite() && r == r.trunc() && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else if r.is_finite() && r.abs() < 1e-4 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn fmt_params(e: &BoundEntry) -> String {
    e.params
        .iter()
        .map(|(k, v)| format!("{k}={}", fmt_num(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

fn snake(v: impl serde::Serialize) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn csv_text(report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "section", "bound_name", "anchor", "kind", "level", "unit", "value", "tags", "params",
        "inputs_digest",
    ];
    w.write_record(header).expect("in-memory write");
    for (section, e) in report.all_entries() {
        w.write_record([
            section.to_string(),
            e.bound_name.clone(),
            e.anchor.clone(),
            snake(e.kind),
            snake(e.level),
            snake(e.unit),
            fmt_num(e.value),
            e.tags.join(";"),
            fmt_params(e),
            e.inputs_digest.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn chain_line() -> String {
    let levels = [
        CapacityLevel::QuantumAssisted,
        CapacityLevel::OneWay,
        CapacityLevel::TwoWay,
        CapacityLevel::Ppt,
        CapacityLevel::InputDimension,
    ];
    levels.iter().map(|l| l.symbol()).collect::<Vec<_>>().join(" <= ")
}

fn entries_table(out: &mut String, entries: &[BoundEntry]) {
    let report = BoundReport {
        entries: entries.to_vec(),
    };
    let ordered = report.chain_ordered();
    for kind in [BoundKind::Lower, BoundKind::Upper] {
        let rows: Vec<_> = ordered.iter().filter(|e| e.kind == kind).collect();
        if rows.is_empty() {
            continue;
        }
        let title = if kind == BoundKind::Lower { "Lower bounds" } else { "Upper bounds" };
        let _ = writeln!(out, "\n### {title}\n");
        let _ = writeln!(out, "| bound | level | unit | value | anchor | tags | params |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|");
        for e in rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} |",
                e.bound_name,
                e.level.symbol(),
                snake(e.unit),
                fmt_num(e.value),
                e.anchor,
                e.tags.join(", "),
                fmt_params(e).replace(';', ", ")
            );
        }
    }
}

fn markdown_text(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Assisted capacity report\n");
    let _ = writeln!(out, "- schema version: {}", report.schema_version);
    let _ = writeln!(out, "- seed: {}", report.seed);
    let names: Vec<_> = report.analyses.iter().map(|a| a.name()).collect();
    let _ = writeln!(out, "- analyses: {}", names.join(", "));
    let _ = writeln!(out, "- chain: {}", chain_line());
    let _ = writeln!(out, "- exit code: {}", report.status.exit_code);
    for reason in &report.status.reasons {
        let _ = writeln!(out, "  - {reason}");
    }
    for c in &report.channels {
        let _ = writeln!(out, "\n## {} ({})\n", c.name, c.channel_type);
        let _ = writeln!(
            out,
            "- dims: d_A = {}, d_B = {}, d_C = {}",
            c.dims.a, c.dims.b, c.dims.c
        );
        let _ = writeln!(out, "- source: {}", c.source);
        let _ = writeln!(out, "- inputs digest: {}", c.inputs_digest);
        let _ = writeln!(out, "- chain violations: {}", c.chain_violations.len());
        for n in &c.notes {
            let _ = writeln!(out, "- note: {n}");
        }
        entries_table(&mut out, &c.entries);
    }
    for g in &report.global {
        let _ = writeln!(out, "\n## {} ({})\n", g.analysis, g.anchor);
        for (k, v) in &g.details {
            let v = round_value(v.clone());
            let shown = match &v {
                Value::Object(_) | Value::Array(_) => format!("`{v}`"),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "- {k}: {shown}");
        }
        for n in &g.notes {
            let _ = writeln!(out, "- note: {n}");
        }
        entries_table(&mut out, &g.entries);
    }
    out
}

/// Renders `report` in `format`; the result ends with a newline.
pub fn emit(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&json_value(report)).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => csv_text(report),
        OutputFormat::Markdown => markdown_text(report),
    }
}
