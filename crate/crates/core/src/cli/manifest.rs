use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::llm::{write_atomic, FixtureMode};

/// What a compile run was asked to do. Enough to replay it in fixture mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<String>,
    pub model: String,
    pub samples: usize,
    pub seed: Option<u64>,
    pub fixture_mode: FixtureMode,
    pub fixture_dir: Option<String>,
    pub output_dir: String,
    pub config: serde_json::Value,
    pub started_at: String,
    #[serde(default)]
    pub finished_at: Option<String>,
    /// Samples that parsed, filled in when the run ends.
    #[serde(default)]
    pub kept_samples: Option<usize>,
}

impl RunManifest {
    pub fn now() -> String {
        Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut body = serde_json::to_string_pretty(self)?;
        body.push('\n');
        write_atomic(path, body.as_bytes())
    }
}
