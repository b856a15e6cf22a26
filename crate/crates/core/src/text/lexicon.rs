use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;

const DALE_CHALL: &str = include_str!("../../data/dale_chall_familiar.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon entry on line {line} contains whitespace: {entry:?}")]
    InvalidEntry { line: usize, entry: String },
    #[error("lexicon is empty")]
    Empty,
}

/// A set of familiar words, lowercase and whitespace-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashSet<String>,
    source_label: String,
}

impl Lexicon {
    /// The bundled Dale-Chall familiar-word list.
    pub fn dale_chall() -> Self {
        Self::parse(DALE_CHALL, "bundled Dale-Chall long list (readability 0.3.2, Apache-2.0)")
            .expect("bundled lexicon is well formed")
    }

    /// Parses the one-word-per-line format. Blank lines and lines starting
    /// with `#` are skipped; entries are lowercased.
    pub fn parse(contents: &str, source_label: impl Into<String>) -> Result<Self, LexiconError> {
        let mut entries = HashSet::new();
        for (n, line) in contents.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.chars().any(char::is_whitespace) {
                return Err(LexiconError::InvalidEntry { line: n + 1, entry: line.to_string() });
            }
            entries.insert(line.to_lowercase());
        }
        if entries.is_empty() {
            return Err(LexiconError::Empty);
        }
        Ok(Lexicon { entries, source_label: source_label.into() })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let contents = std::fs::read_to_string(path)
            .map_err(|source| LexiconError::Io { path: path.display().to_string(), source })?;
        Self::parse(&contents, path.display().to_string())
    }

    pub fn from_entries<'a>(
        words: impl IntoIterator<Item = &'a str>,
        source_label: impl Into<String>,
    ) -> Result<Self, LexiconError> {
        let joined: Vec<&str> = words.into_iter().collect();
        Self::parse(&joined.join("\n"), source_label)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}
