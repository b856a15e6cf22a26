use serde::{Deserialize, Serialize};

use super::lexicon::Lexicon;
use super::sentence::split_sentences;
use super::word::{classify_difficult, tokenize_words};
use super::TextError;

/// Surface statistics of a text.
///
/// `asl` is words per sentence (also written W/S), `asw` syllables per word,
/// `acw` letters and digits per word (C/W), and `pdw` the percentage of
/// words not found in the familiar-word lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextMetrics {
    pub sentence_count: u64,
    pub word_count: u64,
    pub syllable_count: u64,
    pub character_count: u64,
    pub difficult_word_count: u64,
    pub asl: f64,
    pub asw: f64,
    pub acw: f64,
    pub pdw: f64,
}

impl TextMetrics {
    /// Derives the ratios from raw counts. Returns `None` when there are no
    /// sentences or no words, or more difficult words than words.
    pub fn from_counts(
        sentence_count: u64,
        word_count: u64,
        syllable_count: u64,
        character_count: u64,
        difficult_word_count: u64,
    ) -> Option<Self> {
        if sentence_count == 0 || word_count == 0 || difficult_word_count > word_count {
            return None;
        }
        let words = word_count as f64;
        Some(TextMetrics {
            sentence_count,
            word_count,
            syllable_count,
            character_count,
            difficult_word_count,
            asl: words / sentence_count as f64,
            asw: syllable_count as f64 / words,
            acw: character_count as f64 / words,
            pdw: 100.0 * difficult_word_count as f64 / words,
        })
    }
}

pub fn compute_metrics(text: &str, lexicon: &Lexicon) -> Result<TextMetrics, TextError> {
    let sentences = split_sentences(text)?;
    let (mut words, mut syllables, mut characters, mut difficult) = (0u64, 0u64, 0u64, 0u64);
    for sentence in &sentences {
        for word in tokenize_words(&sentence.text) {
            words += 1;
            syllables += u64::from(word.syllables);
            characters += u64::from(word.characters);
            if classify_difficult(&word, lexicon) {
                difficult += 1;
            }
        }
    }
    TextMetrics::from_counts(sentences.len() as u64, words, syllables, characters, difficult)
        .ok_or(TextError::EmptyText)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_counted_example() {
        let m = compute_metrics("The fox jumps. The dog sleeps now.", &Lexicon::dale_chall()).unwrap();
        assert_eq!(m.sentence_count, 2);
        assert_eq!(m.word_count, 7);
        assert_eq!(m.syllable_count, 7);
        assert_eq!(m.character_count, 26);
        assert_eq!(m.asl, 3.5);
        assert_eq!(m.asw, 1.0);
        assert!((m.acw - 26.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn single_word() {
        let m = compute_metrics("Stop.", &Lexicon::dale_chall()).unwrap();
        assert_eq!((m.sentence_count, m.word_count), (1, 1));
        assert_eq!((m.asl, m.asw), (1.0, 1.0));
    }

    #[test]
    fn empty() {
        assert_eq!(compute_metrics("", &Lexicon::dale_chall()), Err(TextError::EmptyText));
    }

    #[test]
    fn pdw_zero_when_all_familiar() {
        let lex = Lexicon::from_entries(["the", "old", "barn", "fell"], "t").unwrap();
        let m = compute_metrics("The old barn fell.", &lex).unwrap();
        assert_eq!(m.difficult_word_count, 0);
        assert_eq!(m.pdw, 0.0);
    }

    #[test]
    fn difficult_count() {
        let lex = Lexicon::from_entries(["the", "barn"], "t").unwrap();
        let m = compute_metrics("The barn needs conservation.", &lex).unwrap();
        assert_eq!(m.difficult_word_count, 2);
        assert_eq!(m.pdw, 50.0);
    }
}
