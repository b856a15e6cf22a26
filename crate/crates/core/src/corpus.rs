//! Corpus ingestion, excerpt sampling and the excerpt CSV file.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SeededRng;
use crate::text::{split_sentences, tokenize_words};

/// Exact column order of the excerpt CSV.
pub const EXCERPT_COLUMNS: [&str; 7] =
    ["id", "document_id", "sentence_start", "sentence_end", "word_count", "text", "revised_text"];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus directory not found: {0}")]
    MissingDirectory(PathBuf),
    #[error("failed to list {path}: {source}")]
    ListDirectory {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("invalid sampling parameters: {0}")]
    InvalidParameters(String),
    #[error("only {achieved} of {requested} disjoint excerpts could be drawn")]
    InsufficientMaterial { requested: usize, achieved: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV at row {row}: {message}")]
    MalformedCsv { row: usize, message: String },
    #[error("CSV is missing column {0:?}")]
    MissingColumn(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    /// File stem; unique within a corpus.
    pub id: String,
    pub title: Option<String>,
    /// Cleaned text: single spaces, no line breaks.
    pub text: String,
    pub word_count: usize,
    pub source_path: PathBuf,
}

impl Document {
    pub fn from_raw(id: impl Into<String>, raw: &str, source_path: impl Into<PathBuf>) -> Self {
        let title = raw
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .filter(|l| l.chars().count() <= 120 && l.chars().any(char::is_alphabetic))
            .map(clean_text);
        let text = clean_text(raw);
        Document {
            id: id.into(),
            title,
            word_count: tokenize_words(&text).len(),
            text,
            source_path: source_path.into(),
        }
    }
}

/// Replaces line breaks and runs of whitespace with single spaces and trims
/// both ends. Every other character is kept.
pub fn clean_text(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub documents: Vec<Document>,
    pub skipped: Vec<SkippedFile>,
}

/// Loads every `.txt` file directly inside `dir`, sorted by id. Files that
/// cannot be read as UTF-8 are recorded in `skipped` and do not stop the run.
pub fn ingest_dir(dir: impl AsRef<Path>) -> Result<Ingested, CorpusError> {
    let dir = dir.as_ref();
    if !dir.is_dir() {
        return Err(CorpusError::MissingDirectory(dir.to_path_buf()));
    }
    let entries = std::fs::read_dir(dir).map_err(|source| CorpusError::ListDirectory {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && has_txt_extension(p))
        .collect();
    paths.sort();

    let loaded: Vec<Result<Document, SkippedFile>> = paths
        .par_iter()
        .map(|path| {
            let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            std::fs::read_to_string(path)
                .map(|raw| Document::from_raw(id, &raw, path.clone()))
                .map_err(|e| SkippedFile { path: path.clone(), reason: e.to_string() })
        })
        .collect();

    let mut out = Ingested::default();
    let mut seen = HashSet::new();
    for item in loaded {
        match item {
            Ok(doc) if !seen.insert(doc.id.clone()) => out.skipped.push(SkippedFile {
                path: doc.source_path,
                reason: format!("duplicate document id {:?}", doc.id),
            }),
            Ok(doc) => out.documents.push(doc),
            Err(skip) => {
                log::warn!("skipping {}: {}", skip.path.display(), skip.reason);
                out.skipped.push(skip);
            }
        }
    }
    out.documents.sort_by(|a, b| a.id.cmp(&b.id));
    if out.documents.is_empty() {
        log::warn!("no .txt documents found in {}", dir.display());
    }
    Ok(out)
}

fn has_txt_extension(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("txt"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Excerpt {
    pub id: String,
    pub document_id: String,
    /// First sentence, inclusive.
    pub sentence_start: usize,
    /// Last sentence, inclusive.
    pub sentence_end: usize,
    pub text: String,
    pub word_count: usize,
    pub revised_text: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleParams {
    pub n: usize,
    pub min_words: usize,
    pub max_words: usize,
    pub seed: u64,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams { n: 150, min_words: 250, max_words: 300, seed: 42 }
    }
}

/// Draws `n` sentence-aligned excerpts without replacement.
///
/// Each draw picks a random unused sentence start and grows a window one
/// sentence at a time until it holds at least `min_words`. The window is
/// rejected if it passes `max_words` first, runs off the end of the document,
/// or reaches a sentence already used by an earlier excerpt. Accepted
/// sentences are never reused, so excerpts from one document never overlap.
/// Output is in draw order.
pub fn sample_excerpts(corpus: &[Document], params: SampleParams) -> Result<Vec<Excerpt>, CorpusError> {
    let SampleParams { n, min_words, max_words, seed } = params;
    if n == 0 || min_words == 0 || min_words > max_words {
        return Err(CorpusError::InvalidParameters(format!(
            "need n > 0 and 0 < min_words <= max_words (got n={n}, min={min_words}, max={max_words})"
        )));
    }
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }

    let sentences: Vec<Vec<(String, usize)>> = corpus
        .iter()
        .map(|doc| {
            split_sentences(&doc.text)
                .map(|ss| ss.into_iter().map(|s| (s.text, s.word_count)).collect())
                .unwrap_or_default()
        })
        .collect();
    let mut used: Vec<Vec<bool>> = sentences.iter().map(|s| vec![false; s.len()]).collect();
    let mut candidates: Vec<(usize, usize)> = sentences
        .iter()
        .enumerate()
        .flat_map(|(d, ss)| (0..ss.len()).map(move |s| (d, s)))
        .collect();

    let mut rng = SeededRng::new(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n && !candidates.is_empty() {
        let (d, start) = candidates.swap_remove(rng.below(candidates.len()));
        let Some(end) = grow_window(&sentences[d], &used[d], start, min_words, max_words) else {
            continue;
        };
        used[d][start..=end].iter_mut().for_each(|u| *u = true);
        let window = &sentences[d][start..=end];
        let doc_id = &corpus[d].id;
        out.push(Excerpt {
            id: format!("{doc_id}:{start}-{end}"),
            document_id: doc_id.clone(),
            sentence_start: start,
            sentence_end: end,
            text: window.iter().map(|(t, _)| t.as_str()).collect::<Vec<_>>().join(" "),
            word_count: window.iter().map(|(_, w)| w).sum(),
            revised_text: None,
        });
    }

    if out.len() < n {
        return Err(CorpusError::InsufficientMaterial { requested: n, achieved: out.len() });
    }
    Ok(out)
}

fn grow_window(
    sentences: &[(String, usize)],
    used: &[bool],
    start: usize,
    min_words: usize,
    max_words: usize,
) -> Option<usize> {
    let mut total = 0;
    for end in start..sentences.len() {
        if used[end] {
            return None;
        }
        total += sentences[end].1;
        if total > max_words {
            return None;
        }
        if total >= min_words {
            return Some(end);
        }
    }
    None
}

#[derive(Serialize, Deserialize)]
struct ExcerptRow {
    id: String,
    document_id: String,
    sentence_start: usize,
    sentence_end: usize,
    word_count: usize,
    text: String,
    revised_text: String,
}

/// Writes excerpts as CSV with the columns in [`EXCERPT_COLUMNS`]. A missing
/// revision is an empty `revised_text` cell.
pub fn write_excerpts<W: std::io::Write>(excerpts: &[Excerpt], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(EXCERPT_COLUMNS)?;
    for e in excerpts {
        w.serialize(ExcerptRow {
            id: e.id.clone(),
            document_id: e.document_id.clone(),
            sentence_start: e.sentence_start,
            sentence_end: e.sentence_end,
            word_count: e.word_count,
            text: e.text.clone(),
            revised_text: e.revised_text.clone().unwrap_or_default(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_excerpts(excerpts: &[Excerpt], path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    write_excerpts(excerpts, std::io::BufWriter::new(file)).map_err(|e| CorpusError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })
}

pub fn read_excerpts<R: std::io::Read>(reader: R) -> Result<Vec<Excerpt>, CorpusError> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r
        .headers()
        .map_err(|e| CorpusError::MalformedCsv { row: 0, message: e.to_string() })?
        .clone();
    if let Some(missing) = EXCERPT_COLUMNS.iter().find(|c| !headers.iter().any(|h| h == **c)) {
        return Err(CorpusError::MissingColumn(missing.to_string()));
    }

    let mut out = Vec::new();
    for (i, row) in r.deserialize::<ExcerptRow>().enumerate() {
        let row = row.map_err(|e| CorpusError::MalformedCsv { row: i + 1, message: e.to_string() })?;
        out.push(Excerpt {
            id: row.id,
            document_id: row.document_id,
            sentence_start: row.sentence_start,
            sentence_end: row.sentence_end,
            word_count: row.word_count,
            text: row.text,
            revised_text: Some(row.revised_text).filter(|s| !s.is_empty()),
        });
    }
    Ok(out)
}

pub fn load_excerpts(path: impl AsRef<Path>) -> Result<Vec<Excerpt>, CorpusError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    read_excerpts(std::io::BufReader::new(file))
}
