//! Flat report records and their JSON / CSV writers.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::bonnesen::BoundName;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// One checked (or reported) quantity. Fields that do not apply are null.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: &'static str,
    pub check: &'static str,
    pub kappa: f64,
    pub body_id: String,
    #[serde(rename = "A")]
    pub area: Option<f64>,
    #[serde(rename = "P")]
    pub perimeter: Option<f64>,
    pub r_in: Option<f64>,
    #[serde(rename = "R_circ")]
    pub r_circ: Option<f64>,
    pub deficit: Option<f64>,
    pub bound_name: Option<BoundName>,
    pub bound_value: Option<f64>,
    pub slack: Option<f64>,
    pub satisfied: Option<bool>,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub samples: Option<u64>,
    pub seed: u64,
    pub tolerance: Option<f64>,
}

impl Record {
    pub fn new(suite: &'static str, check: &'static str, kappa: f64, body_id: String, seed: u64) -> Self {
        Self {
            suite,
            check,
            kappa,
            body_id,
            area: None,
            perimeter: None,
            r_in: None,
            r_circ: None,
            deficit: None,
            bound_name: None,
            bound_value: None,
            slack: None,
            satisfied: None,
            mc_mean: None,
            mc_stderr: None,
            samples: None,
            seed,
            tolerance: None,
        }
    }
}

pub fn write_records<W: Write>(out: W, format: Format, records: &[Record]) -> Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            out.write_all(b"\n")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn write_report(path: &Path, format: Format, records: &[Record]) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_records(file, format, records)
}
