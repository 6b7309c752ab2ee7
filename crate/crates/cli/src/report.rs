//! Record types and streaming CSV / JSON-lines output.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Serialize, Serializer};
use toric_cubic::torsor::HeightBound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Integral bounds are written as integers, others as decimals.
pub fn serialize_bound<S: Serializer>(b: &HeightBound, s: S) -> std::result::Result<S::Ok, S::Error> {
    if b.value() == b.floor() as f64 {
        s.serialize_u64(b.floor())
    } else {
        s.serialize_f64(b.value())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub field: i64,
    #[serde(serialize_with = "serialize_bound")]
    pub bound: HeightBound,
    pub backend: &'static str,
    pub count: u64,
    pub predicted: f64,
    /// `count / predicted`, absent when nothing is predicted (`B <= 1`).
    pub ratio: Option<f64>,
    pub elapsed_ms: u64,
}

/// The columns of a [`CountReport`] followed by convergence columns. Kept
/// flat because the CSV writer does not support nested records.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub field: i64,
    #[serde(serialize_with = "serialize_bound")]
    pub bound: HeightBound,
    pub backend: &'static str,
    pub count: u64,
    pub predicted: f64,
    pub ratio: Option<f64>,
    pub elapsed_ms: u64,
    pub euler_bound: u64,
    /// `1 / log B`.
    pub inv_log_bound: Option<f64>,
    /// `(ratio - 1) · log B`, bounded if the next term is `O(1/log B)`.
    pub scaled_deviation: Option<f64>,
    /// `s` with `count = c·B·(log B + s)⁶`.
    pub log_shift: Option<f64>,
}

impl CompareRow {
    pub fn new(report: CountReport, euler_bound: u64) -> Self {
        let log_b = (report.bound.value() > 1.0).then(|| report.bound.value().ln());
        CompareRow {
            field: report.field,
            bound: report.bound,
            backend: report.backend,
            count: report.count,
            predicted: report.predicted,
            ratio: report.ratio,
            elapsed_ms: report.elapsed_ms,
            euler_bound,
            inv_log_bound: log_b.map(|l| 1.0 / l),
            scaled_deviation: report.ratio.zip(log_b).map(|(r, l)| (r - 1.0) * l),
            log_shift: report.ratio.zip(log_b).map(|(r, l)| (r.powf(1.0 / 6.0) - 1.0) * l),
        }
    }
}

enum Sink {
    Csv(csv::Writer<Box<dyn Write>>),
    Json(Box<dyn Write>),
}

/// Writes one record at a time and flushes after each, so long runs can be
/// followed as they progress.
pub struct RecordWriter {
    sink: Sink,
}

impl RecordWriter {
    pub fn open(format: Format, output: Option<&Path>) -> Result<Self> {
        let out: Box<dyn Write> = match output {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        let sink = match format {
            Format::Csv => Sink::Csv(csv::Writer::from_writer(out)),
            Format::Json => Sink::Json(out),
        };
        Ok(RecordWriter { sink })
    }

    pub fn write<T: Serialize>(&mut self, record: &T) -> Result<()> {
        match &mut self.sink {
            Sink::Csv(w) => {
                w.serialize(record)?;
                w.flush()?;
            }
            Sink::Json(w) => {
                serde_json::to_writer(&mut *w, record)?;
                w.write_all(b"\n")?;
                w.flush()?;
            }
        }
        Ok(())
    }
}
