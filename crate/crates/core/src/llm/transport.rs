//! HTTP transports: live network, replay from fixtures, and record.
//!
//! A fixture directory holds one `<fingerprint>.json` file per distinct
//! request, where the fingerprint is the SHA-256 of method, path and body
//! (headers, including the API key, are excluded). Each file lists the
//! responses observed for that request in order; replay serves them in turn
//! and repeats the last one once the list is exhausted.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

static NETWORK_CALLS: AtomicU64 = AtomicU64::new(0);

/// Requests sent over the network by any [`LiveTransport`] in this process.
pub fn network_calls() -> u64 {
    NETWORK_CALLS.load(Ordering::SeqCst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "GET")]
    Get,
    #[serde(rename = "POST")]
    Post,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Get => "GET",
            Method::Post => "POST",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpRequest {
    pub method: Method,
    /// Path including the `/v1` prefix, e.g. `/v1/chat/completions`.
    pub path: String,
    pub content_type: Option<String>,
    pub body: Vec<u8>,
    /// Bearer token; not part of the fingerprint.
    pub bearer: Option<String>,
}

impl HttpRequest {
    pub fn get(path: impl Into<String>) -> Self {
        HttpRequest { method: Method::Get, path: path.into(), content_type: None, body: Vec::new(), bearer: None }
    }

    pub fn post_json(path: impl Into<String>, body: Vec<u8>) -> Self {
        HttpRequest {
            method: Method::Post,
            path: path.into(),
            content_type: Some("application/json".into()),
            body,
            bearer: None,
        }
    }

    /// Hex SHA-256 over `METHOD path\n` followed by the body bytes.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.method.as_str().as_bytes());
        h.update(b" ");
        h.update(self.path.as_bytes());
        h.update(b"\n");
        h.update(&self.body);
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("network error: {0}")]
    Network(String),
    #[error("no fixture for {method} {path} (fingerprint {fingerprint})")]
    FixtureMiss { fingerprint: String, method: &'static str, path: String },
    #[error("fixture error in {path}: {message}")]
    Fixture { path: PathBuf, message: String },
}

pub trait Transport: Send + Sync {
    fn send(&self, request: &HttpRequest) -> Result<HttpResponse, TransportError>;

    /// True when requests leave the process; the client requires an API key
    /// only for these.
    fn is_live(&self) -> bool {
        false
    }
}

pub struct LiveTransport {
    base_url: String,
    client: reqwest::blocking::Client,
}

impl LiveTransport {
    pub fn new(base_url: impl Into<String>, timeout: Duration) -> Result<Self, TransportError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| TransportError::Network(e.to_string()))?;
        Ok(LiveTransport { base_url: base_url.into().trim_end_matches('/').to_string(), client })
    }
}

impl Transport for LiveTransport {
    fn send(&self, request: &HttpRequest) -> Result<HttpResponse, TransportError> {
        let url = format!("{}{}", self.base_url, request.path);
        let mut builder = match request.method {
            Method::Get => self.client.get(&url),
            Method::Post => self.client.post(&url).body(request.body.clone()),
        };
        if let Some(ct) = &request.content_type {
            builder = builder.header("Content-Type", ct);
        }
        if let Some(token) = &request.bearer {
            builder = builder.bearer_auth(token);
        }
        NETWORK_CALLS.fetch_add(1, Ordering::SeqCst);
        let response = builder.send().map_err(|e| TransportError::Network(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response.bytes().map_err(|e| TransportError::Network(e.to_string()))?.to_vec();
        Ok(HttpResponse { status, body })
    }

    fn is_live(&self) -> bool {
        true
    }
}

/// One recorded response. JSON bodies are stored as JSON; anything else as a
/// string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordedResponse {
    pub status: u16,
    pub body: Value,
}

impl RecordedResponse {
    pub fn json(status: u16, body: Value) -> Self {
        RecordedResponse { status, body }
    }

    fn from_http(r: &HttpResponse) -> Self {
        let body = serde_json::from_slice(&r.body)
            .unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&r.body).into_owned()));
        RecordedResponse { status: r.status, body }
    }

    fn to_http(&self) -> HttpResponse {
        let body = match &self.body {
            Value::String(s) => s.clone().into_bytes(),
            other => serde_json::to_vec(other).expect("json value"),
        };
        HttpResponse { status: self.status, body }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub method: Method,
    pub path: String,
    pub responses: Vec<RecordedResponse>,
}

pub fn fixture_path(dir: &Path, request: &HttpRequest) -> PathBuf {
    dir.join(format!("{}.json", request.fingerprint()))
}

/// Writes (or replaces) the fixture for `request`.
pub fn write_fixture(
    dir: impl AsRef<Path>,
    request: &HttpRequest,
    responses: Vec<RecordedResponse>,
) -> std::io::Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let path = fixture_path(dir, request);
    let fixture = Fixture { method: request.method, path: request.path.clone(), responses };
    std::fs::write(&path, serde_json::to_vec_pretty(&fixture)?)?;
    Ok(path)
}

/// Serves responses from a fixture directory. Never touches the network;
/// a request with no fixture is an error.
pub struct ReplayTransport {
    fixtures: HashMap<String, Vec<HttpResponse>>,
    cursors: Mutex<HashMap<String, usize>>,
}

impl ReplayTransport {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self, TransportError> {
        let dir = dir.as_ref();
        let bad = |path: &Path, message: String| TransportError::Fixture { path: path.to_path_buf(), message };
        let entries = std::fs::read_dir(dir).map_err(|e| bad(dir, e.to_string()))?;
        let mut fixtures = HashMap::new();
        for entry in entries.filter_map(Result::ok) {
            let path = entry.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            let key = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let bytes = std::fs::read(&path).map_err(|e| bad(&path, e.to_string()))?;
            let fixture: Fixture = serde_json::from_slice(&bytes).map_err(|e| bad(&path, e.to_string()))?;
            if fixture.responses.is_empty() {
                return Err(bad(&path, "fixture has no responses".into()));
            }
            fixtures.insert(key, fixture.responses.iter().map(RecordedResponse::to_http).collect());
        }
        Ok(ReplayTransport { fixtures, cursors: Mutex::new(HashMap::new()) })
    }

    pub fn len(&self) -> usize {
        self.fixtures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixtures.is_empty()
    }
}

impl Transport for ReplayTransport {
    fn send(&self, request: &HttpRequest) -> Result<HttpResponse, TransportError> {
        let key = request.fingerprint();
        let Some(responses) = self.fixtures.get(&key) else {
            return Err(TransportError::FixtureMiss {
                fingerprint: key,
                method: request.method.as_str(),
                path: request.path.clone(),
            });
        };
        let mut cursors = self.cursors.lock().expect("cursor lock");
        let cursor = cursors.entry(key).or_insert(0);
        let response = responses[(*cursor).min(responses.len() - 1)].clone();
        *cursor += 1;
        Ok(response)
    }
}

/// Sends through an inner transport and appends every response to the
/// fixture directory.
pub struct RecordingTransport<T> {
    inner: T,
    dir: PathBuf,
    write_lock: Mutex<()>,
}

impl<T: Transport> RecordingTransport<T> {
    pub fn new(inner: T, dir: impl Into<PathBuf>) -> Self {
        RecordingTransport { inner, dir: dir.into(), write_lock: Mutex::new(()) }
    }
}

impl<T: Transport> Transport for RecordingTransport<T> {
    fn send(&self, request: &HttpRequest) -> Result<HttpResponse, TransportError> {
        let response = self.inner.send(request)?;
        let _guard = self.write_lock.lock().expect("record lock");
        let path = fixture_path(&self.dir, request);
        let bad = |message: String| TransportError::Fixture { path: path.clone(), message };
        let mut responses = match std::fs::read(&path) {
            Ok(bytes) => serde_json::from_slice::<Fixture>(&bytes).map_err(|e| bad(e.to_string()))?.responses,
            Err(_) => Vec::new(),
        };
        responses.push(RecordedResponse::from_http(&response));
        write_fixture(&self.dir, request, responses).map_err(|e| bad(e.to_string()))?;
        Ok(response)
    }

    fn is_live(&self) -> bool {
        self.inner.is_live()
    }
}
