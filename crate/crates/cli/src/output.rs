use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Num)
    }
}

impl Cell {
    /// 17 significant digits, enough to round-trip any binary64.
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => Value::from(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) if s.is_empty() => Value::Null,
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// Process exit status and the message that goes with it.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_DISAGREES: i32 = 4;

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.code {
            EXIT_CONFIG => "config",
            EXIT_NUMERICAL => "numerical",
            EXIT_DISAGREES => "disagrees",
            _ => "io",
        }
    }
}

impl From<phonon_casimir::Error> for Failure {
    fn from(e: phonon_casimir::Error) -> Self {
        Failure {
            code: if e.is_config_error() {
                EXIT_CONFIG
            } else {
                EXIT_NUMERICAL
            },
            message: e.to_string(),
        }
    }
}

/// Everything a subcommand prints. Rows are kept in sweep order.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
    pub summary: Option<Value>,
    /// Repeat the summary as a `#` comment line in CSV output.
    pub summary_in_csv: bool,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Table {
            command,
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            summary: None,
            summary_in_csv: true,
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }

    pub fn set_summary(&mut self, summary: impl Serialize) {
        self.summary = Some(serde_json::to_value(summary).expect("summary serializes"));
    }

    pub fn write(
        &self,
        out: &mut dyn Write,
        format: Format,
        timestamp: Option<u64>,
        failure: Option<&Failure>,
    ) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out, timestamp, failure),
            Format::Json => self.write_json(out, timestamp, failure),
        }
    }

    fn write_csv(&self, out: &mut dyn Write, timestamp: Option<u64>, failure: Option<&Failure>) -> std::io::Result<()> {
        writeln!(out, "# phonon-casimir {}", self.command)?;
        if let Some(t) = timestamp {
            writeln!(out, "# timestamp: {t}")?;
        }
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}")?;
        }
        for n in &self.notes {
            writeln!(out, "# note: {n}")?;
        }
        if !self.columns.is_empty() {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::csv))?;
            }
            w.flush()?;
        }
        if let Some(s) = self.summary.as_ref().filter(|_| self.summary_in_csv) {
            writeln!(out, "# summary: {s}")?;
        }
        if let Some(f) = failure {
            writeln!(out, "# error: exit {} ({}): {}", f.code, f.kind(), f.message)?;
        }
        Ok(())
    }

    fn write_json(
        &self,
        out: &mut dyn Write,
        timestamp: Option<u64>,
        failure: Option<&Failure>,
    ) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct ErrorRecord<'a> {
            exit_code: i32,
            kind: &'a str,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            command: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            timestamp: Option<u64>,
            meta: Map<String, Value>,
            columns: &'a [String],
            rows: Vec<Map<String, Value>>,
            notes: &'a [String],
            #[serde(skip_serializing_if = "Option::is_none")]
            summary: Option<&'a Value>,
            #[serde(skip_serializing_if = "Option::is_none")]
            error: Option<ErrorRecord<'a>>,
        }
        let doc = Doc {
            command: self.command,
            timestamp,
            meta: self
                .meta
                .iter()
                .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
                .collect(),
            columns: &self.columns,
            rows: self
                .rows
                .iter()
                .map(|r| self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect())
                .collect(),
            notes: &self.notes,
            summary: self.summary.as_ref(),
            error: failure.map(|f| ErrorRecord {
                exit_code: f.code,
                kind: f.kind(),
                message: &f.message,
            }),
        };
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}
