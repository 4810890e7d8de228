//! Serialization of observable series.
//!
//! CSV: fixed header, every value with 12 significant digits, LF endings.
//! JSON: one object holding the scenario echo, its summary and the series.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::ObservableRecord;
use crate::scenario::{ScenarioResult, ScenarioSpec, ScenarioSummary};

pub const CSV_HEADER: [&str; 7] = [
    "t",
    "imbalance",
    "imbalance_scaled",
    "variance",
    "entanglement_bits",
    "norm_error",
    "energy",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// 12 significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds `x` the way [`format_value`] prints it.
pub fn printed(x: f64) -> f64 {
    format_value(x).parse().expect("formatted float parses")
}

fn record_fields(r: &ObservableRecord) -> [f64; 7] {
    [
        r.t,
        r.imbalance,
        r.imbalance_scaled,
        r.variance,
        r.entanglement_bits,
        r.norm_error,
        r.energy,
    ]
}

pub fn write_csv<W: Write>(records: &[ObservableRecord], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(record_fields(r).map(format_value))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<ObservableRecord>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::InvalidScenario(format!(
            "unexpected CSV header: {header:?}"
        )));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let mut v = [0.0; 7];
        for (slot, field) in v.iter_mut().zip(row.iter()) {
            *slot = field
                .parse()
                .map_err(|_| Error::InvalidScenario(format!("bad number `{field}` in series")))?;
        }
        out.push(ObservableRecord {
            t: v[0],
            imbalance: v[1],
            imbalance_scaled: v[2],
            variance: v[3],
            entanglement_bits: v[4],
            norm_error: v[5],
            energy: v[6],
        });
    }
    Ok(out)
}

/// Layout of a JSON output file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonDocument {
    pub spec: ScenarioSpec,
    pub summary: ScenarioSummary,
    pub series: Vec<ObservableRecord>,
}

pub fn write_json<W: Write>(result: &ScenarioResult, writer: W) -> Result<()> {
    let doc = JsonDocument {
        spec: result.spec.clone(),
        summary: result.summary.clone(),
        series: result.series.clone(),
    };
    serde_json::to_writer_pretty(writer, &doc)?;
    Ok(())
}

pub fn read_json<R: Read>(reader: R) -> Result<JsonDocument> {
    Ok(serde_json::from_reader(reader)?)
}
