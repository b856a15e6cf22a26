//! Client for OpenAI-compatible chat completion and fine-tuning endpoints.
//!
//! All traffic goes through a [`Transport`], so the same client runs against
//! the network, a fixture directory, or a scripted test double.

mod client;
pub mod transport;

pub use client::{
    ApiClient, ChatMessage, ChatRequest, ChatResponse, ClientSettings, FineTuneJob, JobStatus, RetryPolicy, Usage,
    API_KEY_ENV, DEFAULT_TEMPERATURE,
};
pub use transport::{
    network_calls, HttpRequest, HttpResponse, LiveTransport, Method, RecordedResponse, RecordingTransport,
    ReplayTransport, Transport, TransportError,
};

use thiserror::Error;

use crate::dataset::ValidationReport;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("server error {status} after {attempts} attempts")]
    TransientServerError { status: u16, attempts: u32 },
    #[error("API error {status}: {message}")]
    Api { status: u16, message: String },
    #[error("network error after {attempts} attempts: {message}")]
    Network { message: String, attempts: u32 },
    #[error("no replay fixture for {method} {path} (fingerprint {fingerprint})")]
    FixtureMiss { fingerprint: String, method: &'static str, path: String },
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("unexpected response: {0}")]
    Protocol(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error("training file refused before upload:\n{0}")]
    ValidationRefused(ValidationReport),
    #[error("fine-tuning job {job_id} failed: {message}")]
    JobFailed { job_id: String, message: String },
    #[error("timed out waiting for job {job_id} (last status {status:?})")]
    PollTimeout { job_id: String, status: JobStatus },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
