//! Output assembly: the run manifest and the three output formats.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Everything that determines the output bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input_digest: Option<String>,
    pub seed: u64,
    pub cap: Option<usize>,
    pub guards: &'static str,
    pub version: &'static str,
}

/// A command result: structured data for JSON, a table for CSV and lines for
/// the pretty form.
#[derive(Debug, Clone)]
pub struct Report {
    pub result: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(result: Value) -> Self {
        Report { result, columns: Vec::new(), rows: Vec::new(), lines: Vec::new() }
    }

    pub fn columns(mut self, cols: &[&str]) -> Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().collect());
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }
}

pub fn render(manifest: &RunManifest, report: &Report, format: Format) -> std::io::Result<Vec<u8>> {
    let mut out = Vec::new();
    match format {
        Format::Json => {
            let doc = serde_json::json!({"manifest": manifest, "result": report.result});
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.push(b'\n');
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.columns)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Pretty => {
            writeln!(out, "# {} (v{})", manifest.command, manifest.version)?;
            if let Some(d) = &manifest.input_digest {
                writeln!(out, "# input sha256 {d}")?;
            }
            for line in &report.lines {
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(out)
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}
