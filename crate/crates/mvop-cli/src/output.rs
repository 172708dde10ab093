use crate::CliError;
use mvop::linalg::CMat;
use serde_json::{json, Value};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Header plus rows of numbers.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Everything a command produces; rendered only after the command finished.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub default_format: Format,
}

pub fn resolve_format(flag: Option<Format>, out: Option<&Path>, default: Format) -> Format {
    if let Some(f) = flag {
        return f;
    }
    match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => default,
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).map_err(|e| CliError::Computation(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| CliError::Validation("this command has no CSV form; use --format json".into()))?;
            table_to_csv(table)
        }
    }
}

pub fn table_to_csv(table: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Computation(e.to_string());
    w.write_record(&table.header).map_err(fail)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| fmt_f64(v))).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Computation(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Computation(e.to_string()))
}

/// Shortest round-trip text; exponent form outside `[1e-5, 1e16)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Rows of `[re, im]` pairs.
pub fn mat_json(m: &CMat<f64>) -> Value {
    let n = m.n();
    Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect())).collect())
}

/// Column names `{name}_{i}{j}_re`, `{name}_{i}{j}_im`, row-major, one-based.
pub fn mat_columns(name: &str, r: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(2 * r * r);
    for i in 0..r {
        for j in 0..r {
            cols.push(format!("{name}_{}{}_re", i + 1, j + 1));
            cols.push(format!("{name}_{}{}_im", i + 1, j + 1));
        }
    }
    cols
}

pub fn mat_values(m: &CMat<f64>, out: &mut Vec<f64>) {
    for z in m.as_slice() {
        out.push(z.re);
        out.push(z.im);
    }
}
