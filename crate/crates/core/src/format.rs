//! Trace file formats.
//!
//! CSV: header `clock,amplitude`, one row per clock starting at 0.
//! JSON: `{ "T": n, "label": str, "samples": [int...] }`.
//! Both round-trip the samples bit-exactly; CSV does not carry the label.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{InblError, Result};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Csv,
    Json,
}

impl TraceFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TraceFormat::Csv => "csv",
            TraceFormat::Json => "json",
        }
    }

    /// Guess from a file name; anything not ending in `.json` is CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => TraceFormat::Json,
            _ => TraceFormat::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    clock: usize,
    amplitude: i64,
}

#[derive(Serialize, Deserialize)]
struct JsonTrace {
    #[serde(rename = "T")]
    clocks: usize,
    #[serde(default)]
    label: String,
    samples: Vec<i64>,
}

fn parse_err(e: impl std::fmt::Display) -> InblError {
    InblError::Parse(e.to_string())
}

pub fn write_csv<W: Write>(trace: &Trace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (clock, &amplitude) in trace.samples().iter().enumerate() {
        w.serialize(CsvRow { clock, amplitude }).map_err(parse_err)?;
    }
    w.flush().map_err(parse_err)
}

pub fn read_csv<R: Read>(input: R) -> Result<Trace> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(parse_err)?;
    if headers != vec!["clock", "amplitude"] {
        return Err(InblError::Parse(format!(
            "expected header `clock,amplitude`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (expected, row) in r.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(parse_err)?;
        if row.clock != expected {
            return Err(InblError::Parse(format!(
                "clock column out of sequence: expected {expected}, found {}",
                row.clock
            )));
        }
        samples.push(row.amplitude);
    }
    Trace::new(samples)
}

pub fn to_json(trace: &Trace) -> String {
    let doc = JsonTrace {
        clocks: trace.len(),
        label: trace.label().to_string(),
        samples: trace.samples().to_vec(),
    };
    serde_json::to_string(&doc).expect("trace serializes")
}

pub fn from_json(text: &str) -> Result<Trace> {
    let doc: JsonTrace = serde_json::from_str(text).map_err(parse_err)?;
    if doc.clocks != doc.samples.len() {
        return Err(InblError::Parse(format!(
            "T = {} but {} samples present",
            doc.clocks,
            doc.samples.len()
        )));
    }
    Ok(Trace::new(doc.samples)?.with_label(doc.label))
}

pub fn encode(trace: &Trace, format: TraceFormat) -> Vec<u8> {
    match format {
        TraceFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(trace, &mut buf).expect("in-memory write");
            buf
        }
        TraceFormat::Json => {
            let mut s = to_json(trace);
            s.push('\n');
            s.into_bytes()
        }
    }
}

pub fn decode(bytes: &[u8], format: TraceFormat) -> Result<Trace> {
    match format {
        TraceFormat::Csv => read_csv(bytes),
        TraceFormat::Json => from_json(std::str::from_utf8(bytes).map_err(parse_err)?),
    }
}
