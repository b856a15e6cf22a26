//! Project configuration (`hazelkit.json`).
//!
//! Relative paths resolve against the directory holding the config file.
//! The API key is never read from here; it comes from `HAZELKIT_API_KEY`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use hazelkit::corpus::SampleParams;
use hazelkit::dataset::DEFAULT_SYSTEM_MESSAGE;
use hazelkit::llm::DEFAULT_TEMPERATURE;
use serde::{Deserialize, Serialize};

pub const DEFAULT_CONFIG: &str = "hazelkit.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApiConfig {
    pub base_url: String,
    pub model: String,
    pub temperature: f64,
    pub max_output_tokens: Option<u32>,
    pub max_in_flight: usize,
    pub max_attempts: u32,
    pub timeout_secs: u64,
    /// Replay fixtures for `--offline`, and the target of `--record`.
    pub fixtures_dir: Option<PathBuf>,
}

impl Default for ApiConfig {
    fn default() -> Self {
        ApiConfig {
            base_url: "https://api.openai.com".into(),
            model: "gpt-3.5-turbo".into(),
            temperature: DEFAULT_TEMPERATURE,
            max_output_tokens: None,
            max_in_flight: 4,
            max_attempts: 3,
            timeout_secs: 120,
            fixtures_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub corpus_dir: Option<PathBuf>,
    /// Familiar-word list; the bundled Dale-Chall list when absent.
    pub lexicon_path: Option<PathBuf>,
    pub sample: SampleParams,
    pub split_ratio: f64,
    pub api: ApiConfig,
    pub system_message: String,
    pub templates_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            corpus_dir: None,
            lexicon_path: None,
            sample: SampleParams::default(),
            split_ratio: 0.8,
            api: ApiConfig::default(),
            system_message: DEFAULT_SYSTEM_MESSAGE.into(),
            templates_dir: None,
        }
    }
}

impl Config {
    /// Loads `path`. When `explicit` is false and the file does not exist,
    /// defaults are used.
    pub fn load(path: &Path, explicit: bool) -> anyhow::Result<Self> {
        if !path.exists() {
            if explicit {
                bail!("config file not found: {}", path.display());
            }
            return Ok(Config::default());
        }
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config: Config =
            serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.resolve(base);
        Ok(config)
    }

    fn resolve(&mut self, base: &Path) {
        for p in [
            &mut self.corpus_dir,
            &mut self.lexicon_path,
            &mut self.templates_dir,
            &mut self.api.fixtures_dir,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    /// Checks every configured path and reports all that are missing at once.
    pub fn validate(&self) -> anyhow::Result<()> {
        let mut problems = Vec::new();
        let checks = [
            ("corpus_dir", &self.corpus_dir, true),
            ("lexicon_path", &self.lexicon_path, false),
            ("templates_dir", &self.templates_dir, true),
            ("api.fixtures_dir", &self.api.fixtures_dir, true),
        ];
        for (name, path, is_dir) in checks {
            if let Some(p) = path {
                let ok = if is_dir { p.is_dir() } else { p.is_file() };
                if !ok {
                    problems.push(format!("{name}: {} does not exist", p.display()));
                }
            }
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            problems.push(format!("split_ratio: {} is not strictly between 0 and 1", self.split_ratio));
        }
        if !(self.api.temperature.is_finite() && self.api.temperature >= 0.0) {
            problems.push(format!("api.temperature: {} must be >= 0", self.api.temperature));
        }
        if self.system_message.trim().is_empty() {
            problems.push("system_message: must not be empty".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            bail!("invalid configuration:\n  {}", problems.join("\n  "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_when_missing() {
        let c = Config::load(Path::new("/nonexistent/hazelkit.json"), false).unwrap();
        assert_eq!(c, Config::default());
        assert!(Config::load(Path::new("/nonexistent/hazelkit.json"), true).is_err());
    }

    #[test]
    fn resolves_relative_paths_and_reports_all_problems() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hazelkit.json");
        std::fs::write(
            &path,
            r#"{"corpus_dir": "corpus", "lexicon_path": "words.txt", "split_ratio": 1.5,
                "sample": {"n": 5, "min_words": 10, "max_words": 20, "seed": 1}}"#,
        )
        .unwrap();
        let c = Config::load(&path, true).unwrap();
        assert_eq!(c.corpus_dir.as_deref(), Some(dir.path().join("corpus").as_path()));
        assert_eq!(c.sample.n, 5);
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("corpus_dir") && err.contains("lexicon_path") && err.contains("split_ratio"), "{err}");
    }

    #[test]
    fn rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"api_key": "sk-123"}"#).unwrap();
        assert!(Config::load(&path, true).is_err());
    }
}
