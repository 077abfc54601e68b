//! Report assembly and rendering.
//!
//! A report is a list of entries rendered either as aligned human-readable
//! text or as `key=value` records, one per line. Floats in machine records
//! use Rust's shortest round-trip formatting.

use std::fmt::Write as _;

use crate::config::{OutputFormat, RunConfig};

enum Entry {
    Field(String, String),
    /// Shown only in machine format.
    Record(String, String),
    Matrix {
        name: String,
        labels: Vec<String>,
        values: Vec<Vec<f64>>,
    },
    Note(String),
}

pub struct Report {
    command: &'static str,
    entries: Vec<Entry>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            entries: Vec::new(),
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push(Entry::Field(key.into(), value.to_string()));
        self
    }

    pub fn number(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.field(key, num(value))
    }

    pub fn matrix(&mut self, name: &str, labels: &[String], values: Vec<Vec<f64>>) -> &mut Self {
        self.entries.push(Entry::Matrix {
            name: name.to_string(),
            labels: labels.to_vec(),
            values,
        });
        self
    }

    pub fn record(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push(Entry::Record(key.into(), value.to_string()));
        self
    }

    /// Free text shown only in text format.
    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.entries.push(Entry::Note(text.into()));
        self
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.output_format {
            OutputFormat::Machine => self.render_machine(cfg),
            OutputFormat::Text => self.render_text(cfg),
        }
    }

    fn render_machine(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command={}", self.command);
        let _ = writeln!(out, "assert_tol={}", num(cfg.assert_tol));
        let _ = writeln!(out, "bisect_tol={}", num(cfg.bisect_tol));
        let _ = writeln!(out, "grid={}", cfg.oracle_grid);
        for entry in &self.entries {
            match entry {
                Entry::Field(k, v) | Entry::Record(k, v) => {
                    let _ = writeln!(out, "{k}={v}");
                }
                Entry::Matrix { name, values, .. } => {
                    for (i, row) in values.iter().enumerate() {
                        for (j, v) in row.iter().enumerate() {
                            let _ = writeln!(out, "{name}.{i}.{j}={}", num(*v));
                        }
                    }
                }
                Entry::Note(_) => {}
            }
        }
        out
    }

    fn render_text(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# probmetric {} (assert-tol {}, bisect-tol {}, grid {})",
            self.command,
            num(cfg.assert_tol),
            num(cfg.bisect_tol),
            cfg.oracle_grid
        );
        let width = self
            .entries
            .iter()
            .filter_map(|e| match e {
                Entry::Field(k, _) => Some(k.len()),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        for entry in &self.entries {
            match entry {
                Entry::Field(k, v) => {
                    let _ = writeln!(out, "{k:<width$}  {v}");
                }
                Entry::Matrix { name, labels, values } => {
                    let _ = writeln!(out, "{name}:");
                    let cells: Vec<Vec<String>> = values
                        .iter()
                        .map(|row| row.iter().map(|v| format!("{v:.6}")).collect())
                        .collect();
                    let col = cells
                        .iter()
                        .flatten()
                        .map(String::len)
                        .chain(labels.iter().map(String::len))
                        .max()
                        .unwrap_or(1);
                    let lab = labels.iter().map(String::len).max().unwrap_or(1);
                    let mut header = format!("  {:lab$}", "");
                    for l in labels {
                        let _ = write!(header, " {l:>col$}");
                    }
                    let _ = writeln!(out, "{header}");
                    for (l, row) in labels.iter().zip(&cells) {
                        let mut line = format!("  {l:lab$}");
                        for c in row {
                            let _ = write!(line, " {c:>col$}");
                        }
                        let _ = writeln!(out, "{line}");
                    }
                }
                Entry::Note(text) => {
                    let _ = writeln!(out, "{text}");
                }
                Entry::Record(..) => {}
            }
        }
        out
    }
}
