//! Completion providers and the record/replay fixture store.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// One completion call. `sample_index` distinguishes repeated calls with an
/// identical prompt; `attempt` counts retries within a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub prompt: String,
    pub model: String,
    pub sample_index: usize,
    pub attempt: usize,
    /// Passed through to the endpoint untouched (temperature, seed, ...).
    #[serde(default)]
    pub options: serde_json::Map<String, serde_json::Value>,
}

impl CompletionRequest {
    pub fn new(prompt: impl Into<String>, model: impl Into<String>) -> Self {
        CompletionRequest {
            prompt: prompt.into(),
            model: model.into(),
            sample_index: 0,
            attempt: 0,
            options: Default::default(),
        }
    }

    pub fn digest(&self) -> String {
        request_digest(&self.prompt, &self.model)
    }
}

/// Hex SHA-256 of `model`, a NUL byte, then `prompt`.
pub fn request_digest(prompt: &str, model: &str) -> String {
    let mut h = Sha256::new();
    h.update(model.as_bytes());
    h.update([0u8]);
    h.update(prompt.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderResponse {
    pub raw_text: String,
    pub model: String,
    pub request_digest: String,
}

pub trait CompletionProvider: Send + Sync {
    fn complete(&self, request: &CompletionRequest) -> Result<ProviderResponse>;
}

impl<P: CompletionProvider + ?Sized> CompletionProvider for Box<P> {
    fn complete(&self, request: &CompletionRequest) -> Result<ProviderResponse> {
        (**self).complete(request)
    }
}

impl<P: CompletionProvider + ?Sized> CompletionProvider for &P {
    fn complete(&self, request: &CompletionRequest) -> Result<ProviderResponse> {
        (**self).complete(request)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureMode {
    /// Live calls, nothing stored.
    #[default]
    Off,
    /// Live calls, every response stored.
    Record,
    /// Stored responses only; no network access.
    Replay,
}

impl FromStr for FixtureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(FixtureMode::Off),
            "record" => Ok(FixtureMode::Record),
            "replay" => Ok(FixtureMode::Replay),
            other => Err(Error::InvalidParameter(format!(
                "fixture mode {other:?} is not one of off, record, replay"
            ))),
        }
    }
}

impl std::fmt::Display for FixtureMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FixtureMode::Off => "off",
            FixtureMode::Record => "record",
            FixtureMode::Replay => "replay",
        })
    }
}

/// One stored response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub request_digest: String,
    pub prompt: String,
    pub model: String,
    pub sample_index: usize,
    pub raw_text: String,
}

/// A directory of JSON fixture files keyed by request digest and sample
/// index. Writes go through a single lock and land via rename.
#[derive(Debug)]
pub struct FixtureStore {
    dir: PathBuf,
    writer: Mutex<()>,
}

impl FixtureStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureStore {
            dir: dir.into(),
            writer: Mutex::new(()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, digest: &str, sample_index: usize) -> PathBuf {
        let short = &digest[..digest.len().min(16)];
        self.dir.join(format!("{short}-{sample_index:04}.json"))
    }

    pub fn load(&self, request: &CompletionRequest) -> Result<FixtureRecord> {
        let digest = request.digest();
        let path = self.path_for(&digest, request.sample_index);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::Provider(format!(
                    "no recorded response for sample {} of request {} (expected {})",
                    request.sample_index,
                    &digest[..16],
                    path.display()
                )))
            }
            Err(e) => return Err(Error::io(path, e)),
        };
        let record: FixtureRecord = serde_json::from_str(&text).map_err(|e| Error::Fixture {
            path: path.clone(),
            message: e.to_string(),
        })?;
        if record.request_digest != digest {
            return Err(Error::Fixture {
                path,
                message: format!(
                    "digest {} does not match request digest {digest}",
                    record.request_digest
                ),
            });
        }
        Ok(record)
    }

    pub fn save(&self, record: &FixtureRecord) -> Result<PathBuf> {
        let _guard = self.writer.lock().unwrap_or_else(|p| p.into_inner());
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path_for(&record.request_digest, record.sample_index);
        let mut body = serde_json::to_string_pretty(record)?;
        body.push('\n');
        write_atomic(&path, body.as_bytes())?;
        Ok(path)
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Serves stored responses and never touches the network.
#[derive(Debug)]
pub struct ReplayProvider {
    store: FixtureStore,
}

impl ReplayProvider {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReplayProvider {
            store: FixtureStore::new(dir),
        }
    }
}

impl CompletionProvider for ReplayProvider {
    fn complete(&self, request: &CompletionRequest) -> Result<ProviderResponse> {
        let record = self.store.load(request)?;
        log::debug!("replayed sample {} from {}", request.sample_index, self.store.dir().display());
        Ok(ProviderResponse {
            raw_text: record.raw_text,
            model: record.model,
            request_digest: record.request_digest,
        })
    }
}

/// Forwards to `inner` and stores every successful response.
pub struct RecordingProvider<P> {
    inner: P,
    store: FixtureStore,
}

impl<P: CompletionProvider> RecordingProvider<P> {
    pub fn new(inner: P, dir: impl Into<PathBuf>) -> Self {
        RecordingProvider {
            inner,
            store: FixtureStore::new(dir),
        }
    }
}

impl<P: CompletionProvider> CompletionProvider for RecordingProvider<P> {
    fn complete(&self, request: &CompletionRequest) -> Result<ProviderResponse> {
        let response = self.inner.complete(request)?;
        let path = self.store.save(&FixtureRecord {
            request_digest: request.digest(),
            prompt: request.prompt.clone(),
            model: request.model.clone(),
            sample_index: request.sample_index,
            raw_text: response.raw_text.clone(),
        })?;
        log::debug!("recorded sample {} to {}", request.sample_index, path.display());
        Ok(response)
    }
}

/// Answers from a closure; handy for tests and for scripting fixtures.
pub struct FnProvider<F>(pub F);

impl<F> CompletionProvider for FnProvider<F>
where
    F: Fn(&CompletionRequest) -> Result<String> + Send + Sync,
{
    fn complete(&self, request: &CompletionRequest) -> Result<ProviderResponse> {
        Ok(ProviderResponse {
            raw_text: (self.0)(request)?,
            model: request.model.clone(),
            request_digest: request.digest(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_model_sensitive() {
        let a = request_digest("hello", "m1");
        assert_eq!(a, request_digest("hello", "m1"));
        assert_ne!(a, request_digest("hello", "m2"));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn record_then_replay() {
        let dir = tempfile::tempdir().unwrap();
        let live = FnProvider(|r: &CompletionRequest| Ok(format!("answer {}", r.sample_index)));
        let recorder = RecordingProvider::new(live, dir.path());
        let mut req = CompletionRequest::new("prompt", "model");
        for i in 0..3 {
            req.sample_index = i;
            recorder.complete(&req).unwrap();
        }
        let replay = ReplayProvider::new(dir.path());
        req.sample_index = 2;
        assert_eq!(replay.complete(&req).unwrap().raw_text, "answer 2");
        req.sample_index = 7;
        assert!(matches!(replay.complete(&req), Err(Error::Provider(_))));
        req.model = "other".into();
        req.sample_index = 0;
        assert!(matches!(replay.complete(&req), Err(Error::Provider(_))));
    }

    #[test]
    fn corrupt_fixture_is_a_fixture_error() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::new(dir.path());
        let req = CompletionRequest::new("p", "m");
        std::fs::write(store.path_for(&req.digest(), 0), "{ not json").unwrap();
        assert!(matches!(store.load(&req), Err(Error::Fixture { .. })));
    }

    #[test]
    fn fixture_mode_parsing() {
        assert_eq!("replay".parse::<FixtureMode>().unwrap(), FixtureMode::Replay);
        assert!("live".parse::<FixtureMode>().is_err());
        assert_eq!(FixtureMode::Record.to_string(), "record");
    }
}
