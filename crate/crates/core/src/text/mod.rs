//! Text segmentation and the surface statistics the readability formulas consume.
//!
//! Everything here is a pure function of its input. Sentences are split with a
//! rule-based boundary detector, words are runs of letters and digits (with
//! internal apostrophes and hyphens), syllables come from a vowel-group
//! heuristic, and difficult words are judged against a familiar-word lexicon.

mod lexicon;
mod metrics;
mod sentence;
mod syllable;
mod word;

pub use lexicon::{Lexicon, LexiconError};
pub use metrics::{compute_metrics, TextMetrics};
pub use sentence::{split_sentences, Sentence, ABBREVIATIONS};
pub use syllable::count_syllables;
pub use word::{classify_difficult, tokenize_words, Word};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    /// The input contains no letters, so there is nothing to segment.
    #[error("text contains no letters")]
    EmptyText,
}
