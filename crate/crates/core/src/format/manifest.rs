//! Run manifests: everything needed to regenerate an instance set or rerun a
//! solve bit-identically.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub schema_version: u64,
    pub tool_version: String,
    /// Fully resolved command-line arguments (without the program name),
    /// including any seed that was generated automatically.
    pub args: Vec<String>,
    pub class: Option<String>,
    pub n: Option<usize>,
    pub instances: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Value,
    pub outputs: Vec<String>,
}

impl ExperimentManifest {
    pub fn new(args: Vec<String>) -> Self {
        Self {
            schema_version: super::json::SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            args,
            class: None,
            n: None,
            instances: None,
            seed: None,
            params: Value::Null,
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema {
            path: "$".into(),
            message: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut m = ExperimentManifest::new(vec!["gen".into(), "--n".into(), "8".into()]);
        m.seed = Some(42);
        m.outputs.push("out.json".into());
        assert_eq!(ExperimentManifest::from_json(&m.to_json()).unwrap(), m);
        assert!(ExperimentManifest::from_json("{}").is_err());
    }
}
