//! CSV and JSON emission.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use ldpc_spectra::real::Real;
use ldpc_spectra::spectrum::rational_to_f64;

use crate::{CliError, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Header plus string rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Two-column table from `(key, value)` pairs.
    pub fn key_value(pairs: Vec<(&str, String)>) -> Self {
        let mut t = Table::new(&["key", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.to_string(), v]);
        }
        t
    }
}

/// What a subcommand produced, in both shapes.
pub struct CommandResult {
    pub data: Value,
    pub table: Table,
}

/// Shortest round-trip decimal; `inf`, `-inf` and `NaN` for non-finite values.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn int_string(x: &BigInt) -> String {
    x.to_str_radix(10)
}

/// `[numerator, denominator, approx]` as CSV fields.
pub fn rational_fields(x: &BigRational) -> [String; 3] {
    [int_string(x.numer()), int_string(x.denom()), real(rational_to_f64(x))]
}

pub fn rational_json(x: &BigRational) -> Value {
    json!({
        "numerator": int_string(x.numer()),
        "denominator": int_string(x.denom()),
        "approx": Real(rational_to_f64(x)),
    })
}

pub fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::new(Failure::Io, e.to_string()))
}

fn write_csv<W: Write>(w: W, table: &Table) -> Result<(), CliError> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::from(io),
        other => CliError::new(Failure::Io, format!("{other:?}")),
    };
    out.write_record(&table.header).map_err(csv_err)?;
    for row in &table.rows {
        out.write_record(row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit(
    command: &str,
    params: Value,
    seed: u64,
    format: Format,
    result: &CommandResult,
    path: Option<&Path>,
) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => write_csv(sink, &result.table),
        Format::Json => {
            let doc = json!({
                "meta": {
                    "command": command,
                    "params": params,
                    "seed": seed,
                    "version": env!("CARGO_PKG_VERSION"),
                },
                "data": result.data,
            });
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, &doc)
                .map_err(|e| CliError::new(Failure::Io, e.to_string()))?;
            sink.write_all(b"\n")?;
            sink.flush()?;
            Ok(())
        }
    }
}
