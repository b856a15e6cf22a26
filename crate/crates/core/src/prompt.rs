//! Prompt templates for revision requests.
//!
//! A template is UTF-8 text with a `{TEXT}` placeholder. Four templates are
//! built in; more can be loaded from a directory of `<id>.txt` files, which
//! override built-ins of the same id.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

pub const PLACEHOLDER: &str = "{TEXT}";

const BUILTIN: &[(&str, &str)] = &[
    ("plain-english", include_str!("../templates/plain-english.txt")),
    ("active-voice", include_str!("../templates/active-voice.txt")),
    ("short-sentences", include_str!("../templates/short-sentences.txt")),
    ("general-improvement", include_str!("../templates/general-improvement.txt")),
];

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error("template {0:?} has no {{TEXT}} placeholder")]
    MissingPlaceholder(String),
    #[error("failed to read templates from {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub id: String,
    body: String,
}

impl PromptTemplate {
    pub fn new(id: impl Into<String>, body: impl Into<String>) -> Result<Self, TemplateError> {
        let id = id.into();
        let body = body.into();
        if !body.contains(PLACEHOLDER) {
            return Err(TemplateError::MissingPlaceholder(id));
        }
        Ok(PromptTemplate { id, body })
    }

    /// Substitutes `text` for every placeholder. A single trailing newline
    /// in the template file is dropped.
    pub fn instantiate(&self, text: &str) -> String {
        let body = self.body.strip_suffix('\n').unwrap_or(&self.body);
        body.replace(PLACEHOLDER, text)
    }

    pub fn body(&self) -> &str {
        &self.body
    }
}

#[derive(Debug, Clone)]
pub struct TemplateSet {
    templates: BTreeMap<String, PromptTemplate>,
}

impl Default for TemplateSet {
    fn default() -> Self {
        Self::builtin()
    }
}

impl TemplateSet {
    pub fn builtin() -> Self {
        let templates = BUILTIN
            .iter()
            .map(|(id, body)| (id.to_string(), PromptTemplate::new(*id, *body).expect("built-in template")))
            .collect();
        TemplateSet { templates }
    }

    /// Built-ins plus every `.txt` file in `dir`.
    pub fn with_dir(dir: impl AsRef<Path>) -> Result<Self, TemplateError> {
        let dir = dir.as_ref();
        let io = |source| TemplateError::Io { path: dir.display().to_string(), source };
        let mut set = Self::builtin();
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|e| e == "txt"))
            .collect();
        paths.sort();
        for path in paths {
            let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let body = std::fs::read_to_string(&path).map_err(io)?;
            set.insert(PromptTemplate::new(id, body)?);
        }
        Ok(set)
    }

    pub fn insert(&mut self, template: PromptTemplate) {
        self.templates.insert(template.id.clone(), template);
    }

    pub fn get(&self, id: &str) -> Result<&PromptTemplate, TemplateError> {
        self.templates.get(id).ok_or_else(|| TemplateError::UnknownTemplate(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.templates.keys().map(String::as_str)
    }
}
