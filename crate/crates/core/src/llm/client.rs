use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::transport::{HttpRequest, HttpResponse, Method, Transport, TransportError};
use super::LlmError;
use crate::dataset::{validate_jsonl, DEFAULT_SYSTEM_MESSAGE};
use crate::prompt::{TemplateError, TemplateSet};

pub const API_KEY_ENV: &str = "HAZELKIT_API_KEY";
pub const DEFAULT_TEMPERATURE: f64 = 0.7;

const MULTIPART_BOUNDARY: &str = "hazelkit-form-boundary-5f1c2a9e";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn new(role: &str, content: impl Into<String>) -> Self {
        ChatMessage { role: role.to_string(), content: content.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_output_tokens: Option<u32>,
}

#[derive(Serialize)]
struct ChatBody<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_tokens: Option<u32>,
}

impl ChatRequest {
    pub fn new(model: impl Into<String>, messages: Vec<ChatMessage>) -> Self {
        ChatRequest { model: model.into(), messages, temperature: DEFAULT_TEMPERATURE, max_output_tokens: None }
    }

    fn validate(&self) -> Result<(), LlmError> {
        if self.messages.is_empty() {
            return Err(LlmError::InvalidRequest("no messages".into()));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(LlmError::InvalidRequest(format!("temperature {} must be >= 0", self.temperature)));
        }
        if self.max_output_tokens == Some(0) {
            return Err(LlmError::InvalidRequest("max_output_tokens must be positive".into()));
        }
        Ok(())
    }

    /// The wire request. Identical values always produce identical bytes.
    pub fn to_http(&self) -> HttpRequest {
        let body = ChatBody {
            model: &self.model,
            messages: &self.messages,
            temperature: self.temperature,
            max_tokens: self.max_output_tokens,
        };
        HttpRequest::post_json("/v1/chat/completions", serde_json::to_vec(&body).expect("serializable"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatResponse {
    pub content: String,
    pub usage: Usage,
    /// Transport sends used, including retries.
    pub attempts: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Queued,
    Running,
    Succeeded,
    Failed,
    Cancelled,
}

impl JobStatus {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "validating_files" | "queued" => JobStatus::Queued,
            "running" | "cancelling" => JobStatus::Running,
            "succeeded" => JobStatus::Succeeded,
            "failed" => JobStatus::Failed,
            "cancelled" => JobStatus::Cancelled,
            _ => return None,
        })
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, JobStatus::Succeeded | JobStatus::Failed | JobStatus::Cancelled)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FineTuneJob {
    pub job_id: String,
    pub base_model: String,
    pub training_file_id: String,
    pub epochs: Option<u32>,
    pub batch_size: Option<u32>,
    pub status: JobStatus,
    /// Set exactly when `status` is `Succeeded`.
    pub fine_tuned_model: Option<String>,
    pub error_message: Option<String>,
}

impl FineTuneJob {
    fn from_json(v: &Value) -> Result<Self, LlmError> {
        let s = |key: &str| v.get(key).and_then(Value::as_str).map(str::to_string);
        let required = |key: &str| s(key).ok_or_else(|| LlmError::Protocol(format!("job response lacks {key:?}")));
        let status_str = required("status")?;
        let status =
            JobStatus::parse(&status_str).ok_or_else(|| LlmError::Protocol(format!("unknown job status {status_str:?}")))?;
        let hyper = |key: &str| {
            v.get("hyperparameters")
                .and_then(|h| h.get(key))
                .and_then(Value::as_u64)
                .map(|n| n as u32)
        };
        let fine_tuned_model = match status {
            JobStatus::Succeeded => Some(required("fine_tuned_model")?),
            _ => None,
        };
        Ok(FineTuneJob {
            job_id: required("id")?,
            base_model: required("model")?,
            training_file_id: required("training_file")?,
            epochs: hyper("n_epochs"),
            batch_size: hyper("batch_size"),
            status,
            fine_tuned_model,
            error_message: v.get("error").and_then(|e| e.get("message")).and_then(Value::as_str).map(str::to_string),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub initial_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_attempts: 3, initial_delay: Duration::from_millis(500), max_delay: Duration::from_secs(8) }
    }
}

impl RetryPolicy {
    /// Delay before attempt `attempt + 1`, doubling from `initial_delay`.
    pub fn delay_after(&self, attempt: u32) -> Duration {
        let factor = 2u32.saturating_pow(attempt.saturating_sub(1));
        self.initial_delay.saturating_mul(factor).min(self.max_delay)
    }
}

#[derive(Debug, Clone)]
pub struct ClientSettings {
    pub api_key: Option<String>,
    pub system_message: String,
    pub temperature: f64,
    pub max_output_tokens: Option<u32>,
    pub max_in_flight: usize,
    pub retry: RetryPolicy,
    pub templates: TemplateSet,
}

impl Default for ClientSettings {
    fn default() -> Self {
        ClientSettings {
            api_key: None,
            system_message: DEFAULT_SYSTEM_MESSAGE.to_string(),
            temperature: DEFAULT_TEMPERATURE,
            max_output_tokens: None,
            max_in_flight: 4,
            retry: RetryPolicy::default(),
            templates: TemplateSet::builtin(),
        }
    }
}

impl ClientSettings {
    /// Reads the API key from `HAZELKIT_API_KEY`, if set and non-empty.
    pub fn api_key_from_env(mut self) -> Self {
        self.api_key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());
        self
    }
}

/// Shareable across threads; all methods take `&self`.
pub struct ApiClient {
    transport: Arc<dyn Transport>,
    settings: ClientSettings,
}

impl ApiClient {
    pub fn new(transport: Arc<dyn Transport>, settings: ClientSettings) -> Self {
        ApiClient { transport, settings }
    }

    pub fn settings(&self) -> &ClientSettings {
        &self.settings
    }

    fn send(&self, mut request: HttpRequest) -> Result<(HttpResponse, u32), LlmError> {
        if self.transport.is_live() {
            let key = self
                .settings
                .api_key
                .as_ref()
                .ok_or_else(|| LlmError::Auth(format!("{API_KEY_ENV} is not set")))?;
            request.bearer = Some(key.clone());
        }

        let policy = self.settings.retry;
        let max = policy.max_attempts.max(1);
        let mut attempt = 0;
        loop {
            attempt += 1;
            let retryable = match self.transport.send(&request) {
                Ok(resp) if (200..300).contains(&resp.status) => return Ok((resp, attempt)),
                Ok(resp) if resp.status == 401 || resp.status == 403 => {
                    return Err(LlmError::Auth(error_message(&resp)));
                }
                Ok(resp) if resp.status == 429 => LlmError::RateLimited { attempts: attempt },
                Ok(resp) if resp.status >= 500 => {
                    LlmError::TransientServerError { status: resp.status, attempts: attempt }
                }
                Ok(resp) => return Err(LlmError::Api { status: resp.status, message: error_message(&resp) }),
                Err(TransportError::Network(message)) => LlmError::Network { message, attempts: attempt },
                Err(TransportError::FixtureMiss { fingerprint, method, path }) => {
                    return Err(LlmError::FixtureMiss { fingerprint, method, path });
                }
                Err(TransportError::Fixture { path, message }) => {
                    return Err(LlmError::Fixture(format!("{}: {message}", path.display())));
                }
            };
            if attempt >= max {
                return Err(retryable);
            }
            log::debug!("attempt {attempt} failed ({retryable}); retrying");
            std::thread::sleep(policy.delay_after(attempt));
        }
    }

    fn send_json(&self, request: HttpRequest) -> Result<(Value, u32), LlmError> {
        let (resp, attempts) = self.send(request)?;
        let value = serde_json::from_slice(&resp.body).map_err(|e| LlmError::Protocol(e.to_string()))?;
        Ok((value, attempts))
    }

    pub fn chat_complete(&self, request: &ChatRequest) -> Result<ChatResponse, LlmError> {
        request.validate()?;
        let (v, attempts) = self.send_json(request.to_http())?;
        let content = v
            .pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .ok_or_else(|| LlmError::Protocol("response has no choices[0].message.content".into()))?
            .to_string();
        let usage = v.get("usage").and_then(|u| serde_json::from_value(u.clone()).ok()).unwrap_or_default();
        Ok(ChatResponse { content, usage, attempts })
    }

    /// The request `revise_text` would send: the configured system message
    /// followed by the template applied to `text`.
    pub fn revision_request(&self, text: &str, template_id: &str, model: &str) -> Result<ChatRequest, LlmError> {
        let template = self.settings.templates.get(template_id).map_err(|e| match e {
            TemplateError::UnknownTemplate(id) => LlmError::UnknownTemplate(id),
            other => LlmError::InvalidRequest(other.to_string()),
        })?;
        let mut request = ChatRequest::new(
            model,
            vec![
                ChatMessage::new("system", &self.settings.system_message),
                ChatMessage::new("user", template.instantiate(text)),
            ],
        );
        request.temperature = self.settings.temperature;
        request.max_output_tokens = self.settings.max_output_tokens;
        Ok(request)
    }

    /// Returns the model's revision verbatim.
    pub fn revise_text(&self, text: &str, template_id: &str, model: &str) -> Result<String, LlmError> {
        let request = self.revision_request(text, template_id, model)?;
        Ok(self.chat_complete(&request)?.content)
    }

    /// Revises every text with at most `max_in_flight` requests outstanding.
    /// Results are in input order.
    pub fn revise_batch(&self, texts: &[String], template_id: &str, model: &str) -> Vec<Result<String, LlmError>> {
        let workers = self.settings.max_in_flight.max(1).min(texts.len().max(1));
        let next = AtomicUsize::new(0);
        let results: Mutex<Vec<Option<Result<String, LlmError>>>> =
            Mutex::new((0..texts.len()).map(|_| None).collect());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(text) = texts.get(i) else { break };
                    let result = self.revise_text(text, template_id, model);
                    results.lock().expect("results lock")[i] = Some(result);
                });
            }
        });
        results
            .into_inner()
            .expect("results lock")
            .into_iter()
            .map(|r| r.expect("every index processed"))
            .collect()
    }

    /// The multipart upload request for a training file.
    pub fn upload_request(path: &Path, contents: &[u8]) -> HttpRequest {
        let filename = path.file_name().unwrap_or_default().to_string_lossy();
        let mut body = Vec::with_capacity(contents.len() + 512);
        body.extend_from_slice(
            format!(
                "--{MULTIPART_BOUNDARY}\r\nContent-Disposition: form-data; name=\"purpose\"\r\n\r\nfine-tune\r\n\
                 --{MULTIPART_BOUNDARY}\r\nContent-Disposition: form-data; name=\"file\"; filename=\"{filename}\"\r\n\
                 Content-Type: application/jsonl\r\n\r\n"
            )
            .as_bytes(),
        );
        body.extend_from_slice(contents);
        body.extend_from_slice(format!("\r\n--{MULTIPART_BOUNDARY}--\r\n").as_bytes());
        HttpRequest {
            method: Method::Post,
            path: "/v1/files".into(),
            content_type: Some(format!("multipart/form-data; boundary={MULTIPART_BOUNDARY}")),
            body,
            bearer: None,
        }
    }

    /// Validates the file locally, then uploads it. Returns the file id.
    pub fn upload_training_file(&self, path: impl AsRef<Path>) -> Result<String, LlmError> {
        let path = path.as_ref();
        let report = validate_jsonl(path).map_err(|e| LlmError::InvalidRequest(e.to_string()))?;
        if !report.passed {
            return Err(LlmError::ValidationRefused(report));
        }
        let contents = std::fs::read(path)?;
        let (v, _) = self.send_json(Self::upload_request(path, &contents))?;
        v.get("id")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| LlmError::Protocol("upload response has no id".into()))
    }

    pub fn submit_request(
        training_file_id: &str,
        base_model: &str,
        epochs: Option<u32>,
        batch_size: Option<u32>,
    ) -> HttpRequest {
        let mut body = serde_json::Map::new();
        body.insert("model".into(), Value::from(base_model));
        body.insert("training_file".into(), Value::from(training_file_id));
        if epochs.is_some() || batch_size.is_some() {
            let mut hyper = serde_json::Map::new();
            if let Some(e) = epochs {
                hyper.insert("n_epochs".into(), Value::from(e));
            }
            if let Some(b) = batch_size {
                hyper.insert("batch_size".into(), Value::from(b));
            }
            body.insert("hyperparameters".into(), Value::Object(hyper));
        }
        HttpRequest::post_json("/v1/fine_tuning/jobs", serde_json::to_vec(&Value::Object(body)).expect("json"))
    }

    pub fn submit_finetune(
        &self,
        training_file_id: &str,
        base_model: &str,
        epochs: Option<u32>,
        batch_size: Option<u32>,
    ) -> Result<FineTuneJob, LlmError> {
        for (name, value) in [("epochs", epochs), ("batch_size", batch_size)] {
            if value == Some(0) {
                return Err(LlmError::InvalidRequest(format!("{name} must be positive")));
            }
        }
        let (v, _) = self.send_json(Self::submit_request(training_file_id, base_model, epochs, batch_size))?;
        FineTuneJob::from_json(&v)
    }

    pub fn job_request(job_id: &str) -> HttpRequest {
        HttpRequest::get(format!("/v1/fine_tuning/jobs/{job_id}"))
    }

    pub fn get_job(&self, job_id: &str) -> Result<FineTuneJob, LlmError> {
        let (v, _) = self.send_json(Self::job_request(job_id))?;
        FineTuneJob::from_json(&v)
    }

    /// Polls until the job reaches a terminal status. A failed job is an
    /// error carrying the API's message; succeeded and cancelled jobs are
    /// returned.
    pub fn poll_job(&self, job_id: &str, interval: Duration, timeout: Duration) -> Result<FineTuneJob, LlmError> {
        let started = Instant::now();
        loop {
            let job = self.get_job(job_id)?;
            match job.status {
                JobStatus::Failed => {
                    return Err(LlmError::JobFailed {
                        job_id: job.job_id,
                        message: job.error_message.unwrap_or_else(|| "no error message".into()),
                    });
                }
                s if s.is_terminal() => return Ok(job),
                s => {
                    if started.elapsed() + interval > timeout {
                        return Err(LlmError::PollTimeout { job_id: job_id.to_string(), status: s });
                    }
                    std::thread::sleep(interval);
                }
            }
        }
    }
}

fn error_message(resp: &HttpResponse) -> String {
    serde_json::from_slice::<Value>(&resp.body)
        .ok()
        .and_then(|v| v.pointer("/error/message").and_then(Value::as_str).map(str::to_string))
        .unwrap_or_else(|| format!("HTTP {}", resp.status))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use std::collections::VecDeque;

    /// Answers from a fixed queue and records every request it sees.
    struct Scripted {
        responses: Mutex<VecDeque<HttpResponse>>,
        seen: Mutex<Vec<HttpRequest>>,
        live: bool,
    }

    impl Scripted {
        fn new(responses: Vec<(u16, Value)>) -> Arc<Self> {
            Arc::new(Scripted {
                responses: Mutex::new(
                    responses
                        .into_iter()
                        .map(|(status, v)| HttpResponse { status, body: serde_json::to_vec(&v).unwrap() })
                        .collect(),
                ),
                seen: Mutex::new(Vec::new()),
                live: false,
            })
        }

        fn calls(&self) -> usize {
            self.seen.lock().unwrap().len()
        }
    }

    impl Transport for Scripted {
        fn send(&self, request: &HttpRequest) -> Result<HttpResponse, TransportError> {
            self.seen.lock().unwrap().push(request.clone());
            self.responses
                .lock()
                .unwrap()
                .pop_front()
                .ok_or_else(|| TransportError::Network("script exhausted".into()))
        }

        fn is_live(&self) -> bool {
            self.live
        }
    }

    fn settings() -> ClientSettings {
        ClientSettings {
            retry: RetryPolicy { max_attempts: 3, initial_delay: Duration::ZERO, max_delay: Duration::ZERO },
            ..ClientSettings::default()
        }
    }

    fn completion(text: &str) -> Value {
        json!({
            "choices": [{"index": 0, "message": {"role": "assistant", "content": text}}],
            "usage": {"prompt_tokens": 10, "completion_tokens": 5, "total_tokens": 15}
        })
    }

    #[test]
    fn retries_rate_limit_once() {
        let t = Scripted::new(vec![(429, json!({"error": {"message": "slow down"}})), (200, completion("ok"))]);
        let client = ApiClient::new(t.clone(), settings());
        let r = client.chat_complete(&ChatRequest::new("m", vec![ChatMessage::new("user", "hi")])).unwrap();
        assert_eq!(r.content, "ok");
        assert_eq!(r.attempts, 2);
        assert_eq!(r.usage.total_tokens, 15);
        assert_eq!(t.calls(), 2);
    }

    #[test]
    fn gives_up_after_max_attempts() {
        let t = Scripted::new(vec![(503, json!({})), (502, json!({})), (500, json!({})), (200, completion("late"))]);
        let client = ApiClient::new(t.clone(), settings());
        let err = client.chat_complete(&ChatRequest::new("m", vec![ChatMessage::new("user", "hi")])).unwrap_err();
        assert!(matches!(err, LlmError::TransientServerError { status: 500, attempts: 3 }));
        assert_eq!(t.calls(), 3);

        let t = Scripted::new(vec![(429, json!({})); 3]);
        let client = ApiClient::new(t, settings());
        let err = client.chat_complete(&ChatRequest::new("m", vec![ChatMessage::new("user", "hi")])).unwrap_err();
        assert!(matches!(err, LlmError::RateLimited { attempts: 3 }));
    }

    #[test]
    fn auth_and_client_errors_are_not_retried() {
        let t = Scripted::new(vec![(401, json!({"error": {"message": "bad key"}}))]);
        let client = ApiClient::new(t.clone(), settings());
        let err = client.chat_complete(&ChatRequest::new("m", vec![ChatMessage::new("user", "hi")])).unwrap_err();
        assert!(matches!(err, LlmError::Auth(ref m) if m == "bad key"));
        assert_eq!(t.calls(), 1);

        let t = Scripted::new(vec![(400, json!({"error": {"message": "bad model"}}))]);
        let err = ApiClient::new(t, settings())
            .chat_complete(&ChatRequest::new("m", vec![ChatMessage::new("user", "hi")]))
            .unwrap_err();
        assert!(matches!(err, LlmError::Api { status: 400, .. }));
    }

    #[test]
    fn live_without_key_fails_before_sending() {
        let t = Arc::new(Scripted {
            responses: Mutex::new(VecDeque::new()),
            seen: Mutex::new(Vec::new()),
            live: true,
        });
        let client = ApiClient::new(t.clone(), settings());
        let err = client.chat_complete(&ChatRequest::new("m", vec![ChatMessage::new("user", "hi")])).unwrap_err();
        assert!(matches!(err, LlmError::Auth(_)));
        assert_eq!(t.calls(), 0);
    }

    #[test]
    fn bearer_attached_for_live_transport() {
        let t = Arc::new(Scripted {
            responses: Mutex::new(VecDeque::from([HttpResponse {
                status: 200,
                body: serde_json::to_vec(&completion("x")).unwrap(),
            }])),
            seen: Mutex::new(Vec::new()),
            live: true,
        });
        let client = ApiClient::new(t.clone(), ClientSettings { api_key: Some("k".into()), ..settings() });
        client.chat_complete(&ChatRequest::new("m", vec![ChatMessage::new("user", "hi")])).unwrap();
        assert_eq!(t.seen.lock().unwrap()[0].bearer.as_deref(), Some("k"));
    }

    #[test]
    fn request_bytes_are_stable() {
        let mut req = ChatRequest::new("gpt-3.5-turbo", vec![ChatMessage::new("system", "S"), ChatMessage::new("user", "U\n")]);
        assert_eq!(
            String::from_utf8(req.to_http().body).unwrap(),
            r#"{"model":"gpt-3.5-turbo","messages":[{"role":"system","content":"S"},{"role":"user","content":"U\n"}],"temperature":0.7}"#
        );
        req.max_output_tokens = Some(256);
        assert!(String::from_utf8(req.to_http().body).unwrap().ends_with(r#""temperature":0.7,"max_tokens":256}"#));
        assert_eq!(req.to_http(), req.clone().to_http());
    }

    #[test]
    fn invalid_requests() {
        let client = ApiClient::new(Scripted::new(vec![]), settings());
        assert!(matches!(client.chat_complete(&ChatRequest::new("m", vec![])), Err(LlmError::InvalidRequest(_))));
        let mut r = ChatRequest::new("m", vec![ChatMessage::new("user", "x")]);
        r.temperature = -1.0;
        assert!(matches!(client.chat_complete(&r), Err(LlmError::InvalidRequest(_))));
    }

    #[test]
    fn revision_request_shape() {
        let t = Scripted::new(vec![(200, completion("Revised."))]);
        let client = ApiClient::new(t.clone(), settings());
        assert_eq!(client.revise_text("Original.", "plain-english", "ft:hazel").unwrap(), "Revised.");
        let sent: Value = serde_json::from_slice(&t.seen.lock().unwrap()[0].body).unwrap();
        assert_eq!(sent["messages"][0]["role"], "system");
        assert_eq!(sent["messages"][0]["content"], DEFAULT_SYSTEM_MESSAGE);
        assert!(sent["messages"][1]["content"].as_str().unwrap().ends_with("Original."));
        assert!(matches!(client.revise_text("x", "nope", "m"), Err(LlmError::UnknownTemplate(_))));
    }

    #[test]
    fn job_parsing() {
        let v = json!({"id": "ftjob-1", "model": "gpt-3.5-turbo", "training_file": "file-1",
                       "status": "validating_files", "fine_tuned_model": null,
                       "hyperparameters": {"n_epochs": "auto", "batch_size": 4}});
        let job = FineTuneJob::from_json(&v).unwrap();
        assert_eq!(job.status, JobStatus::Queued);
        assert_eq!((job.epochs, job.batch_size), (None, Some(4)));
        let bad = json!({"id": "x", "model": "m", "training_file": "f", "status": "succeeded"});
        assert!(matches!(FineTuneJob::from_json(&bad), Err(LlmError::Protocol(_))));
        let odd = json!({"id": "x", "model": "m", "training_file": "f", "status": "paused"});
        assert!(FineTuneJob::from_json(&odd).is_err());
    }

    #[test]
    fn submit_body() {
        let r = ApiClient::submit_request("file-1", "gpt-3.5-turbo", Some(3), None);
        assert_eq!(
            String::from_utf8(r.body).unwrap(),
            r#"{"hyperparameters":{"n_epochs":3},"model":"gpt-3.5-turbo","training_file":"file-1"}"#
        );
        let r = ApiClient::submit_request("file-1", "m", None, None);
        assert!(!String::from_utf8(r.body).unwrap().contains("hyperparameters"));
    }

    #[test]
    fn backoff_doubles_and_caps() {
        let p = RetryPolicy { max_attempts: 5, initial_delay: Duration::from_millis(100), max_delay: Duration::from_millis(350) };
        assert_eq!(p.delay_after(1), Duration::from_millis(100));
        assert_eq!(p.delay_after(2), Duration::from_millis(200));
        assert_eq!(p.delay_after(3), Duration::from_millis(350));
    }
}
