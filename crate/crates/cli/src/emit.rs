//! CSV and JSON writers. Numbers are written with 17 significant digits.

use std::fmt::Write as _;
use std::io::Write;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};
use crate::run::{Cell, Output};

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(out: &Output) -> String {
    let mut s = String::new();
    for (k, v) in &out.meta {
        let _ = writeln!(s, "# {k} = {v}");
    }
    let header: Vec<String> = out.columns.iter().map(|c| csv_field(c)).collect();
    let _ = writeln!(s, "{}", header.join(","));
    for row in &out.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Text(t) => csv_field(t),
                Cell::Num(x) => number(*x),
            })
            .collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_number(x: f64) -> String {
    if x.is_finite() {
        number(x)
    } else {
        "null".into()
    }
}

pub fn to_json(out: &Output) -> String {
    let mut s = String::from("{\n  \"meta\": {");
    let meta: Vec<String> = out
        .meta
        .iter()
        .map(|(k, v)| format!("\n    {}: {}", json_string(k), json_string(v)))
        .collect();
    s.push_str(&meta.join(","));
    s.push_str(if meta.is_empty() { "},\n" } else { "\n  },\n" });
    let cols: Vec<String> = out.columns.iter().map(|c| json_string(c)).collect();
    let _ = writeln!(s, "  \"columns\": [{}],", cols.join(", "));
    s.push_str("  \"rows\": [");
    let rows: Vec<String> = out
        .rows
        .iter()
        .map(|row| {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(t) => json_string(t),
                    Cell::Num(x) => json_number(*x),
                })
                .collect();
            format!("\n    [{}]", cells.join(", "))
        })
        .collect();
    s.push_str(&rows.join(","));
    s.push_str(if rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    s
}

pub fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Csv => to_csv(out),
        Format::Json => to_json(out),
    }
}

/// Writes the rendered output to the configured path, or to standard output.
pub fn emit_results(out: &Output, cfg: &RunConfig) -> Result<()> {
    let text = render(out, cfg.format);
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Output {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
