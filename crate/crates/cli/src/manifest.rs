use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{read_file, write_file, CliResult};

/// Everything recorded about a build so it can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config: RunConfig,
    pub input_sha256: String,
    pub input_rows: usize,
    pub dropped_rows: usize,
    pub points: usize,
    pub balls: usize,
    pub edges: usize,
    pub cloud_hash: String,
}

impl Manifest {
    pub fn read(path: &Path) -> CliResult<Self> {
        Ok(serde_json::from_str(&read_file(path)?)?)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        write_file(path, s)
    }
}
