//! File formats: `.qubo` text, model/spectrum JSON, CSV tables and run manifests.

pub mod json;
pub mod manifest;
pub mod qubo_text;
pub mod tables;

pub use json::{
    read_model_json, read_spectrum_json, write_model_json, write_spectrum_json, ModelMeta,
};
pub use manifest::ExperimentManifest;
pub use qubo_text::{parse_qubo_text, write_qubo_text, QuboFileDocument};
pub use tables::{
    read_probability_points, read_success_csv, write_histogram_csv, write_success_csv,
};
