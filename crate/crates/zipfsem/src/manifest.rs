use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Record written next to every CLI output. Contains no timestamps, so the
/// same run writes the same bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// e.g. `sim spec`.
    pub subcommand: String,
    /// Every parameter after defaults were applied.
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub toolkit_version: String,
    pub output_paths: Vec<String>,
    /// Per-run summaries: iterations, trace hashes, fitted exponents.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub results: BTreeMap<String, Value>,
}

impl RunManifest {
    pub fn new(subcommand: impl Into<String>, parameters: BTreeMap<String, Value>, seed: u64) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            parameters,
            seed,
            toolkit_version: TOOLKIT_VERSION.to_string(),
            output_paths: Vec::new(),
            results: BTreeMap::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = crate::io::create(path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        std::io::Write::write_all(&mut f, b"\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(std::fs::File::open(path)?)?)
    }
}
