//! Fine-tuning records in the chat-message JSON Lines format.
//!
//! Each line is `{"messages":[{"role":"system","content":...},
//! {"role":"user","content":...},{"role":"assistant","content":...}]}` with
//! `role` before `content` and newlines inside content escaped.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::corpus::Excerpt;
use crate::prompt::PromptTemplate;
use crate::rng::SeededRng;

/// Identity given to the assistant in every record.
pub const DEFAULT_SYSTEM_MESSAGE: &str = "You are HAZEL, an AI assistant designed to support authors of heritage \
guidance with writing clear, accessible content for a general audience in the UK.";

pub const ROLE_ORDER: [&str; 3] = ["system", "user", "assistant"];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("excerpt {0:?} has no revised text")]
    MissingRevision(String),
    #[error("system message is empty")]
    EmptySystemMessage,
    #[error("no records to split")]
    EmptyInput,
    #[error("split ratio must be strictly between 0 and 1, got {0}")]
    InvalidRatio(f64),
    #[error("i/o failure on {path}: {source}")]
    IoFailure {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} failed validation:\n{report}")]
    Invalid { path: String, report: ValidationReport },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub system_message: String,
    pub user_message: String,
    pub assistant_message: String,
    /// Provenance only; not part of the JSON Lines output.
    pub excerpt_id: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct WireMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct WireLine<'a> {
    messages: [WireMessage<'a>; 3],
}

impl TrainingRecord {
    /// One JSON Lines record, without the trailing newline.
    pub fn to_jsonl_line(&self) -> String {
        let line = WireLine {
            messages: [
                WireMessage { role: "system", content: &self.system_message },
                WireMessage { role: "user", content: &self.user_message },
                WireMessage { role: "assistant", content: &self.assistant_message },
            ],
        };
        serde_json::to_string(&line).expect("string fields always serialize")
    }
}

/// One record per excerpt: the user message is `template` applied to the
/// original text, the assistant message is the revision.
pub fn build_records(
    excerpts: &[Excerpt],
    system_message: &str,
    template: &PromptTemplate,
) -> Result<Vec<TrainingRecord>, DatasetError> {
    if system_message.trim().is_empty() {
        return Err(DatasetError::EmptySystemMessage);
    }
    excerpts
        .iter()
        .map(|e| {
            let revision = e
                .revised_text
                .as_deref()
                .filter(|r| !r.trim().is_empty())
                .ok_or_else(|| DatasetError::MissingRevision(e.id.clone()))?;
            Ok(TrainingRecord {
                system_message: system_message.to_string(),
                user_message: template.instantiate(&e.text),
                assistant_message: revision.to_string(),
                excerpt_id: Some(e.id.clone()),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDataset {
    pub train: Vec<TrainingRecord>,
    pub test: Vec<TrainingRecord>,
    pub seed: u64,
    pub ratio: f64,
}

/// Shuffles positions with the seeded generator and puts the first
/// `round(ratio * n)` into `train`.
pub fn split_records(records: Vec<TrainingRecord>, ratio: f64, seed: u64) -> Result<SplitDataset, DatasetError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(DatasetError::InvalidRatio(ratio));
    }
    if records.is_empty() {
        return Err(DatasetError::EmptyInput);
    }
    let n = records.len();
    let mut order: Vec<usize> = (0..n).collect();
    SeededRng::new(seed).shuffle(&mut order);
    let n_train = (ratio * n as f64).round() as usize;

    let mut slots: Vec<Option<TrainingRecord>> = records.into_iter().map(Some).collect();
    let mut take = |i: usize| slots[i].take().expect("each position used once");
    let train: Vec<_> = order[..n_train].iter().map(|&i| take(i)).collect();
    let test: Vec<_> = order[n_train..].iter().map(|&i| take(i)).collect();

    if test.is_empty() || train.is_empty() {
        log::warn!("split of {n} records at ratio {ratio} leaves train={} test={}", train.len(), test.len());
    }
    Ok(SplitDataset { train, test, seed, ratio })
}

pub fn write_jsonl_to<W: Write>(records: &[TrainingRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        out.write_all(r.to_jsonl_line().as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_jsonl(records: &[TrainingRecord], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    let io = |source| DatasetError::IoFailure { path: path.display().to_string(), source };
    let file = std::fs::File::create(path).map_err(io)?;
    write_jsonl_to(records, std::io::BufWriter::new(file)).map_err(io)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    MalformedJson { line: usize, message: String },
    BadRoleOrder { line: usize, found: Vec<String> },
    MissingKey { line: usize, key: String },
    UnexpectedKey { line: usize, key: String },
    WrongMessageCount { line: usize, count: usize },
    NotAString { line: usize, key: String },
    EmptyContent { line: usize, role: String },
    BlankLine { line: usize },
    NoRecords,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::MalformedJson { line, message } => write!(f, "line {line}: malformed JSON: {message}"),
            Diagnostic::BadRoleOrder { line, found } => {
                write!(f, "line {line}: roles {found:?}, expected [system, user, assistant]")
            }
            Diagnostic::MissingKey { line, key } => write!(f, "line {line}: missing key {key:?}"),
            Diagnostic::UnexpectedKey { line, key } => write!(f, "line {line}: unexpected key {key:?}"),
            Diagnostic::WrongMessageCount { line, count } => {
                write!(f, "line {line}: expected 3 messages, found {count}")
            }
            Diagnostic::NotAString { line, key } => write!(f, "line {line}: {key:?} must be a string"),
            Diagnostic::EmptyContent { line, role } => write!(f, "line {line}: empty {role} content"),
            Diagnostic::BlankLine { line } => write!(f, "line {line}: blank line"),
            Diagnostic::NoRecords => write!(f, "file contains no records"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineVerdict {
    pub line: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub lines: Vec<LineVerdict>,
    pub diagnostics: Vec<Diagnostic>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn record_count(&self) -> usize {
        self.lines.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.lines.iter().filter(|l| l.ok).count();
        writeln!(f, "{ok}/{} lines valid", self.lines.len())?;
        for d in &self.diagnostics {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

/// Checks every line and collects all problems rather than stopping at the
/// first one.
pub fn validate_jsonl_str(contents: &str) -> ValidationReport {
    let body = contents.strip_suffix('\n').unwrap_or(contents);
    let mut lines = Vec::new();
    let mut diagnostics = Vec::new();

    if !body.is_empty() {
        for (i, raw) in body.split('\n').enumerate() {
            let line = i + 1;
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            let before = diagnostics.len();
            if raw.trim().is_empty() {
                diagnostics.push(Diagnostic::BlankLine { line });
            } else {
                check_line(line, raw, &mut diagnostics);
            }
            lines.push(LineVerdict { line, ok: diagnostics.len() == before });
        }
    }
    if lines.is_empty() {
        diagnostics.push(Diagnostic::NoRecords);
    }
    let passed = diagnostics.is_empty();
    ValidationReport { lines, diagnostics, passed }
}

fn check_line(line: usize, raw: &str, out: &mut Vec<Diagnostic>) {
    let value: Value = match serde_json::from_str(raw) {
        Ok(v) => v,
        Err(e) => {
            out.push(Diagnostic::MalformedJson { line, message: e.to_string() });
            return;
        }
    };
    let Some(obj) = value.as_object() else {
        out.push(Diagnostic::MalformedJson { line, message: "top level is not an object".into() });
        return;
    };
    for key in obj.keys().filter(|k| *k != "messages") {
        out.push(Diagnostic::UnexpectedKey { line, key: key.clone() });
    }
    let Some(messages) = obj.get("messages") else {
        out.push(Diagnostic::MissingKey { line, key: "messages".into() });
        return;
    };
    let Some(messages) = messages.as_array() else {
        out.push(Diagnostic::MalformedJson { line, message: "\"messages\" is not an array".into() });
        return;
    };
    if messages.len() != 3 {
        out.push(Diagnostic::WrongMessageCount { line, count: messages.len() });
    }

    let mut roles = Vec::new();
    for m in messages {
        let Some(m) = m.as_object() else {
            out.push(Diagnostic::MalformedJson { line, message: "message is not an object".into() });
            return;
        };
        for key in m.keys().filter(|k| *k != "role" && *k != "content") {
            out.push(Diagnostic::UnexpectedKey { line, key: key.clone() });
        }
        let role = match m.get("role") {
            None => {
                out.push(Diagnostic::MissingKey { line, key: "role".into() });
                None
            }
            Some(Value::String(r)) => Some(r.clone()),
            Some(_) => {
                out.push(Diagnostic::NotAString { line, key: "role".into() });
                None
            }
        };
        match m.get("content") {
            None => out.push(Diagnostic::MissingKey { line, key: "content".into() }),
            Some(Value::String(c)) if c.trim().is_empty() => out.push(Diagnostic::EmptyContent {
                line,
                role: role.clone().unwrap_or_default(),
            }),
            Some(Value::String(_)) => {}
            Some(_) => out.push(Diagnostic::NotAString { line, key: "content".into() }),
        }
        roles.push(role.unwrap_or_default());
    }
    if messages.len() == 3 && roles.iter().all(|r| !r.is_empty()) && roles != ROLE_ORDER {
        out.push(Diagnostic::BadRoleOrder { line, found: roles });
    }
}

pub fn validate_jsonl(path: impl AsRef<Path>) -> Result<ValidationReport, DatasetError> {
    let path = path.as_ref();
    let contents = std::fs::read_to_string(path)
        .map_err(|source| DatasetError::IoFailure { path: path.display().to_string(), source })?;
    Ok(validate_jsonl_str(&contents))
}

/// Reads records back from a file that passes validation.
pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Vec<TrainingRecord>, DatasetError> {
    let path = path.as_ref();
    let contents = std::fs::read_to_string(path)
        .map_err(|source| DatasetError::IoFailure { path: path.display().to_string(), source })?;
    let report = validate_jsonl_str(&contents);
    if !report.passed {
        return Err(DatasetError::Invalid { path: path.display().to_string(), report });
    }
    Ok(contents.lines().map(parse_valid_line).collect())
}

fn parse_valid_line(line: &str) -> TrainingRecord {
    #[derive(Deserialize)]
    struct Owned {
        messages: Vec<OwnedMessage>,
    }
    #[derive(Deserialize)]
    struct OwnedMessage {
        content: String,
    }
    let mut parsed: Owned = serde_json::from_str(line).expect("validated line");
    let assistant = parsed.messages.pop().expect("three messages").content;
    let user = parsed.messages.pop().expect("three messages").content;
    let system = parsed.messages.pop().expect("three messages").content;
    TrainingRecord { system_message: system, user_message: user, assistant_message: assistant, excerpt_id: None }
}
