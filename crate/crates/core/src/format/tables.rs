//! CSV tables. Success records use `class,n,instance_id,samples,successes`;
//! histograms use `value,count`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::anneal::SuccessRecord;
use crate::error::{Error, Result};
use crate::landscape::Histogram;

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn write_success_csv<W: Write>(out: W, records: &[SuccessRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_success_csv<R: Read>(input: R) -> Result<Vec<SuccessRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

#[derive(Serialize, Deserialize)]
struct HistogramRow {
    value: f64,
    count: u64,
}

pub fn write_histogram_csv<W: Write>(out: W, h: &Histogram) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in &h.entries {
        w.serialize(HistogramRow {
            value: e.value,
            count: e.count,
        })
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct PointRow {
    n: f64,
    probability: f64,
}

/// `(n, probability)` pairs from a `n,probability` table.
pub fn read_probability_points<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<PointRow>()
        .map(|row| row.map(|p| (p.n, p.probability)).map_err(csv_error))
        .collect()
}
