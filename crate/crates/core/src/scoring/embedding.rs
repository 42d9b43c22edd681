//! Pluggable text encoders for embedding-cosine scores, with an on-disk
//! vector cache.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::scoring::cosine::cosine;
use crate::scoring::text::content_tokens;

#[derive(Debug, Error)]
pub enum EncoderError {
    #[error("encoder transport failed: {0}")]
    Transport(String),
    #[error("encoder returned an invalid response: {0}")]
    Protocol(String),
    #[error("no encoder available and {missing} text(s) are not cached")]
    Offline { missing: usize },
    #[error("embedding cache: {0}")]
    Cache(#[from] std::io::Error),
}

/// Deterministic text-to-vector function identified by `model_id`.
pub trait EmbeddingEncoder: Send + Sync {
    fn model_id(&self) -> &str;
    /// One vector per input, in input order, all of one dimension.
    fn encode_batch(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError>;
}

/// Hash projection of content tokens; stands in for a real model in tests
/// and offline runs.
#[derive(Debug, Clone)]
pub struct StubEncoder {
    model_id: String,
    seed: u64,
    dimension: usize,
}

impl StubEncoder {
    pub const DIMENSION: usize = 64;

    pub fn new(seed: u64) -> Self {
        Self {
            model_id: format!("stub-hash-{seed}"),
            seed,
            dimension: Self::DIMENSION,
        }
    }

    pub fn encode(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dimension];
        for token in content_tokens(text) {
            let mut h = Sha256::new();
            h.update(self.seed.to_le_bytes());
            h.update(token.as_bytes());
            let digest = h.finalize();
            // Two signed slots per token.
            for slot in digest.chunks(4).take(2) {
                let bucket = u16::from_le_bytes([slot[0], slot[1]]) as usize % self.dimension;
                v[bucket] += if slot[2] & 1 == 0 { 1.0 } else { -1.0 };
            }
        }
        v
    }
}

impl EmbeddingEncoder for StubEncoder {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn encode_batch(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        Ok(texts.iter().map(|t| self.encode(t)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HttpEncoderConfig {
    pub url: String,
    pub model: String,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
}

fn default_timeout_secs() -> u64 {
    30
}
fn default_retries() -> u32 {
    2
}
fn default_batch() -> usize {
    64
}

#[derive(Serialize)]
struct EncodeRequest<'a> {
    model: &'a str,
    texts: &'a [String],
}

#[derive(Deserialize)]
struct EncodeResponse {
    #[allow(dead_code)]
    model_id: String,
    vectors: Vec<Vec<f64>>,
}

/// Client for `POST {url}` with `{model, texts}` answering
/// `{model_id, vectors}`.
pub struct HttpEncoder {
    config: HttpEncoderConfig,
    agent: ureq::Agent,
}

impl HttpEncoder {
    pub fn new(config: HttpEncoderConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .build()
            .into();
        Self { config, agent }
    }

    fn post(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        let body = EncodeRequest {
            model: &self.config.model,
            texts,
        };
        let mut last = String::new();
        for attempt in 0..=self.config.retries {
            match self.agent.post(&self.config.url).send_json(&body) {
                Ok(mut response) => {
                    let parsed: EncodeResponse = response
                        .body_mut()
                        .read_json()
                        .map_err(|e| EncoderError::Protocol(e.to_string()))?;
                    return check_vectors(parsed.vectors, texts.len());
                }
                Err(e) => {
                    log::warn!("encoder request attempt {} failed: {e}", attempt + 1);
                    last = e.to_string();
                }
            }
        }
        Err(EncoderError::Transport(last))
    }
}

fn check_vectors(vectors: Vec<Vec<f64>>, expected: usize) -> Result<Vec<Vec<f64>>, EncoderError> {
    if vectors.len() != expected {
        return Err(EncoderError::Protocol(format!("expected {expected} vectors, got {}", vectors.len())));
    }
    if let Some(first) = vectors.first() {
        if vectors.iter().any(|v| v.len() != first.len()) {
            return Err(EncoderError::Protocol("vectors of differing dimension".into()));
        }
    }
    Ok(vectors)
}

impl EmbeddingEncoder for HttpEncoder {
    fn model_id(&self) -> &str {
        &self.config.model
    }

    fn encode_batch(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        let mut out = Vec::with_capacity(texts.len());
        for chunk in texts.chunks(self.config.batch_size.max(1)) {
            out.extend(self.post(chunk)?);
        }
        Ok(out)
    }
}

/// Content-addressed vector files: `<dir>/<model>/<sha256(text)>.json`.
#[derive(Debug)]
pub struct EmbeddingCache {
    dir: PathBuf,
    write_lock: Mutex<()>,
}

impl EmbeddingCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            write_lock: Mutex::new(()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, model_id: &str, text: &str) -> PathBuf {
        let model: String = model_id
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
            .collect();
        self.dir.join(model).join(format!("{}.json", hex::encode(Sha256::digest(text.as_bytes()))))
    }

    pub fn get(&self, model_id: &str, text: &str) -> Option<Vec<f64>> {
        let bytes = fs::read(self.path_for(model_id, text)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    /// Writes through a temporary file and a rename, so readers never see
    /// a partial vector.
    pub fn put(&self, model_id: &str, text: &str, vector: &[f64]) -> Result<(), EncoderError> {
        let path = self.path_for(model_id, text);
        let parent = path.parent().expect("cache paths have a parent");
        let _guard = self.write_lock.lock().unwrap_or_else(|p| p.into_inner());
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(".{}.tmp", std::process::id()));
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&serde_json::to_vec(vector).expect("vectors serialize"))?;
        file.sync_all()?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

/// An encoder (possibly absent) in front of a cache (possibly absent).
pub struct EmbeddingStore {
    model_id: String,
    encoder: Option<Box<dyn EmbeddingEncoder>>,
    cache: Option<EmbeddingCache>,
}

impl EmbeddingStore {
    pub fn new(encoder: Box<dyn EmbeddingEncoder>, cache: Option<EmbeddingCache>) -> Self {
        Self {
            model_id: encoder.model_id().to_owned(),
            encoder: Some(encoder),
            cache,
        }
    }

    /// Cache-only store; texts missing from the cache fail with
    /// [`EncoderError::Offline`].
    pub fn offline(model_id: impl Into<String>, cache: EmbeddingCache) -> Self {
        Self {
            model_id: model_id.into(),
            encoder: None,
            cache: Some(cache),
        }
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    /// Vectors for `texts`, taken from the cache where present.
    pub fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EncoderError> {
        let mut out: Vec<Option<Vec<f64>>> = texts
            .iter()
            .map(|t| self.cache.as_ref().and_then(|c| c.get(&self.model_id, t)))
            .collect();
        let mut missing: Vec<String> = Vec::new();
        let mut seen = HashMap::new();
        for (i, t) in texts.iter().enumerate() {
            if out[i].is_none() && !seen.contains_key(t) {
                seen.insert(t.clone(), missing.len());
                missing.push(t.clone());
            }
        }
        if !missing.is_empty() {
            let encoder = self.encoder.as_ref().ok_or(EncoderError::Offline { missing: missing.len() })?;
            let fresh = check_vectors(encoder.encode_batch(&missing)?, missing.len())?;
            if let Some(cache) = &self.cache {
                for (text, vector) in missing.iter().zip(&fresh) {
                    cache.put(&self.model_id, text, vector)?;
                }
            }
            for (i, t) in texts.iter().enumerate() {
                if out[i].is_none() {
                    out[i] = Some(fresh[seen[t]].clone());
                }
            }
        }
        Ok(out.into_iter().map(|v| v.expect("every slot filled")).collect())
    }

    /// Cosine of the two texts' embeddings.
    pub fn similarity(&self, a: &str, b: &str) -> Result<f64, EncoderError> {
        let v = self.embed(&[a.to_owned(), b.to_owned()])?;
        cosine(&v[0], &v[1]).map_err(|e| EncoderError::Protocol(e.to_string()))
    }
}
