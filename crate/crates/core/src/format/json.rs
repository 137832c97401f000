//! JSON documents for Ising models and low-energy spectra.
//!
//! Model schema (indices in `j` are 1-based, `i < j`):
//!
//! ```json
//! {"schema_version": 1, "n": 3, "h": [1.0, 0.0, -1.0],
//!  "j": [[1, 2, 0.5], [2, 3, -0.5]], "offset": 0.0,
//!  "meta": {"class": "REG", "seed": null, "params": {}}}
//! ```
//!
//! Spectra store configurations as fixed-width bit strings, variable 1 leftmost.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::enumerate::{LowEnergySpectrum, SpectrumState};
use crate::error::{Error, Result};
use crate::model::{Configuration, IsingModel};

pub const SCHEMA_VERSION: u64 = 1;

/// Free-form provenance attached to a model file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub class: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelDocument {
    pub model: IsingModel,
    pub meta: ModelMeta,
    pub warnings: Vec<String>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

pub fn write_model_json(m: &IsingModel, meta: &ModelMeta) -> String {
    let couplings: Vec<Value> = m
        .couplings()
        .iter()
        .map(|(&(a, b), &v)| json!([a + 1, b + 1, v]))
        .collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "n": m.n(),
        "h": m.fields(),
        "j": couplings,
        "offset": m.offset,
        "meta": meta,
    });
    serde_json::to_string_pretty(&doc).expect("model serializes") + "\n"
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("$.{key}"), "required field is missing"))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(path, format!("expected a finite number, got {v}")))
}

pub fn read_model_json(text: &str) -> Result<ModelDocument> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| schema("$", format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    let mut warnings = Vec::new();

    if let Some(v) = obj.get("schema_version") {
        match v.as_u64() {
            Some(SCHEMA_VERSION) => {}
            _ => {
                return Err(schema(
                    "$.schema_version",
                    format!("unsupported version {v}"),
                ))
            }
        }
    }
    let n = field(obj, "n")?
        .as_u64()
        .ok_or_else(|| schema("$.n", "expected a positive integer"))? as usize;

    let h_values = field(obj, "h")?
        .as_array()
        .ok_or_else(|| schema("$.h", "expected an array"))?;
    if h_values.len() != n {
        return Err(schema(
            "$.h",
            format!("expected {n} entries, got {}", h_values.len()),
        ));
    }
    let h = h_values
        .iter()
        .enumerate()
        .map(|(i, v)| as_f64(v, &format!("$.h[{i}]")))
        .collect::<Result<Vec<_>>>()?;

    let mut couplings = Vec::new();
    let j_values = field(obj, "j")?
        .as_array()
        .ok_or_else(|| schema("$.j", "expected an array"))?;
    for (idx, entry) in j_values.iter().enumerate() {
        let path = format!("$.j[{idx}]");
        let triple = entry
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| schema(&path, "expected [i, j, value]"))?;
        let index = |k: usize| {
            triple[k]
                .as_u64()
                .filter(|&x| x >= 1 && x as usize <= n)
                .map(|x| x as usize - 1)
                .ok_or_else(|| {
                    schema(
                        format!("{path}[{k}]"),
                        format!("expected an index in 1..={n}"),
                    )
                })
        };
        let (a, b) = (index(0)?, index(1)?);
        if a >= b {
            return Err(schema(
                &path,
                format!("coupling ({}, {}) must satisfy i < j", a + 1, b + 1),
            ));
        }
        couplings.push((a, b, as_f64(&triple[2], &format!("{path}[2]"))?));
    }

    let offset = match obj.get("offset") {
        Some(v) => as_f64(v, "$.offset")?,
        None => {
            let w = "missing \"offset\"; using 0".to_string();
            log::warn!("{w}");
            warnings.push(w);
            0.0
        }
    };
    let meta = match obj.get("meta") {
        Some(v) => {
            serde_json::from_value(v.clone()).map_err(|e| schema("$.meta", e.to_string()))?
        }
        None => ModelMeta::default(),
    };
    let model =
        IsingModel::from_parts(n, couplings, h, offset).map_err(|e| schema("$", e.to_string()))?;
    Ok(ModelDocument {
        model,
        meta,
        warnings,
    })
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    energy: f64,
    config: String,
}

#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    schema_version: u64,
    n: usize,
    k_requested: usize,
    tolerance: f64,
    total_enumerated: u64,
    ground_degeneracy: u64,
    min: Option<StateDoc>,
    next_lowest_cost: Option<f64>,
    max: Option<StateDoc>,
    states: Vec<StateDoc>,
    #[serde(default)]
    meta: Value,
}

fn state_doc(s: &SpectrumState) -> StateDoc {
    StateDoc {
        energy: s.energy,
        config: s.configuration.to_bit_string(),
    }
}

fn state_from_doc(d: &StateDoc, n: usize, path: &str) -> Result<SpectrumState> {
    let configuration =
        Configuration::parse_bit_string(&d.config).map_err(|e| schema(path, e.to_string()))?;
    if configuration.len() != n {
        return Err(schema(
            path,
            format!(
                "configuration has {} bits, expected {n}",
                configuration.len()
            ),
        ));
    }
    Ok(SpectrumState {
        energy: d.energy,
        configuration,
    })
}

/// Serializes a spectrum; `meta` is stored verbatim.
pub fn write_spectrum_json(s: &LowEnergySpectrum, meta: Value) -> String {
    let doc = SpectrumDoc {
        schema_version: SCHEMA_VERSION,
        n: s.n,
        k_requested: s.k_requested,
        tolerance: s.tolerance,
        total_enumerated: s.total_enumerated,
        ground_degeneracy: s.ground_degeneracy,
        min: s.min.as_ref().map(state_doc),
        next_lowest_cost: s.next_lowest_cost,
        max: s.max.as_ref().map(state_doc),
        states: s.states.iter().map(state_doc).collect(),
        meta,
    };
    serde_json::to_string_pretty(&doc).expect("spectrum serializes") + "\n"
}

pub fn read_spectrum_json(text: &str) -> Result<(LowEnergySpectrum, Value)> {
    let doc: SpectrumDoc = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(schema(
            "$.schema_version",
            format!("unsupported version {}", doc.schema_version),
        ));
    }
    let n = doc.n;
    let states = doc
        .states
        .iter()
        .enumerate()
        .map(|(i, d)| state_from_doc(d, n, &format!("$.states[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let spectrum = LowEnergySpectrum {
        n,
        k_requested: doc.k_requested,
        states,
        min: doc
            .min
            .as_ref()
            .map(|d| state_from_doc(d, n, "$.min"))
            .transpose()?,
        next_lowest_cost: doc.next_lowest_cost,
        max: doc
            .max
            .as_ref()
            .map(|d| state_from_doc(d, n, "$.max"))
            .transpose()?,
        ground_degeneracy: doc.ground_degeneracy,
        total_enumerated: doc.total_enumerated,
        tolerance: doc.tolerance,
    };
    Ok((spectrum, doc.meta))
}
