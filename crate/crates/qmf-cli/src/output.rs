//! Rendering of tables and check reports.

use std::fmt::Write as _;

use clap::ValueEnum;
use qmf::report::{ConstraintReport, Status};
use qmf::scalar::fmt_rational;
use qmf::Series;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Rows of strings under a header; rows are emitted in the given order.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// One row per stored term: exponents, then the coefficient.
    pub fn from_series(s: &Series) -> Self {
        let mut header: Vec<&str> = s.vars().iter().map(|v| v.name()).collect();
        header.push("coeff");
        let mut t = Table::new(&header);
        for (e, c) in s.terms() {
            let mut row: Vec<String> = e.iter().map(i32::to_string).collect();
            row.push(fmt_rational(c));
            t.push(row);
        }
        t
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Text => {
                let mut w: Vec<usize> = self.header.iter().map(String::len).collect();
                for r in &self.rows {
                    for (i, c) in r.iter().enumerate() {
                        w[i] = w[i].max(c.len());
                    }
                }
                let mut out = String::new();
                for r in std::iter::once(&self.header).chain(&self.rows) {
                    let cells: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:>0$}", w[i])).collect();
                    writeln!(out, "{}", cells.join("  ")).unwrap();
                }
                out
            }
            Format::Csv => {
                let mut out = String::new();
                for r in std::iter::once(&self.header).chain(&self.rows) {
                    let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
                    writeln!(out, "{}", cells.join(",")).unwrap();
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.header.iter().cloned().zip(r.iter().map(|c| json!(c))).collect();
                        Value::Object(m)
                    })
                    .collect();
                let v = json!({"columns": self.header, "rows": rows});
                serde_json::to_string_pretty(&v).unwrap() + "\n"
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

pub fn render_reports(reports: &[ConstraintReport], f: Format) -> String {
    let failed = reports.iter().filter(|r| !r.passed()).count();
    match f {
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                writeln!(out, "{r}").unwrap();
                for d in &r.details {
                    writeln!(out, "    {d}").unwrap();
                }
            }
            writeln!(out, "{} checks, {failed} failed", reports.len()).unwrap();
            out
        }
        Format::Csv => {
            let mut t = Table::new(&["check", "window", "status", "info"]);
            for r in reports {
                let (status, info) = match &r.status {
                    Status::Pass { checked } => ("pass", checked.to_string()),
                    Status::Fail { witness } => ("fail", witness.clone()),
                    Status::InsufficientPrecision { detail } => ("insufficient-precision", detail.clone()),
                };
                t.push(vec![r.check.clone(), r.window.clone(), status.into(), info]);
            }
            t.render(Format::Csv)
        }
        Format::Json => {
            let v = json!({
                "checks": reports.iter().map(ConstraintReport::to_json).collect::<Vec<_>>(),
                "failed": failed,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qmf::rat;

    #[test]
    fn renders_all_formats() {
        let mut t = Table::new(&["n", "c"]);
        t.push(vec!["-1".into(), fmt_rational(&rat(2, 1))]);
        t.push(vec!["10".into(), fmt_rational(&rat(-1, 3))]);
        assert_eq!(t.render(Format::Text), " n     c\n-1   2/1\n10  -1/3\n");
        assert_eq!(t.render(Format::Csv), "n,c\n-1,2/1\n10,-1/3\n");
        let v: Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(v["rows"][1]["c"], "-1/3");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["n", "c"]);
        assert_eq!(t.render(Format::Csv), "n,c\n");
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(csv_cell("a,b"), "\"a,b\"");
    }
}
