use serde::{Deserialize, Serialize};

use super::lexicon::Lexicon;
use super::syllable::count_syllables;

const APOSTROPHES: &[char] = &['\'', '’'];
const HYPHENS: &[char] = &['-', '‐'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    /// The token as it appeared, without surrounding punctuation.
    pub surface: String,
    /// Lowercase form with typographic apostrophes folded to `'`.
    pub normalized: String,
    pub syllables: u32,
    /// Letters and digits in `normalized`.
    pub characters: u32,
    pub is_numeric: bool,
    /// First token of the text it was tokenized from.
    pub sentence_initial: bool,
}

impl Word {
    pub fn new(surface: &str, sentence_initial: bool) -> Self {
        let normalized: String = surface
            .chars()
            .map(|c| if c == '’' { '\'' } else { c })
            .collect::<String>()
            .to_lowercase();
        let characters = normalized.chars().filter(|c| c.is_alphanumeric()).count() as u32;
        let is_numeric = !normalized.chars().any(char::is_alphabetic);
        Word {
            surface: surface.to_string(),
            syllables: count_syllables(&normalized),
            characters: characters.max(1),
            is_numeric,
            normalized,
            sentence_initial,
        }
    }

    fn is_capitalized(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_uppercase)
    }
}

/// Splits text into words: maximal runs of letters and digits, joined by
/// apostrophes or hyphens that sit between two such characters. A `.` or `,`
/// between two digits stays inside the token so `3.5` and `1,200` are single
/// numeric words.
pub fn tokenize_words(text: &str) -> Vec<Word> {
    let chars: Vec<char> = text.chars().collect();
    let mut words = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        let prev = i.checked_sub(1).map(|p| chars[p]);
        let next = chars.get(i + 1).copied();
        let keep = if c.is_alphanumeric() {
            true
        } else if APOSTROPHES.contains(&c) || HYPHENS.contains(&c) {
            !current.is_empty()
                && prev.is_some_and(char::is_alphanumeric)
                && next.is_some_and(char::is_alphanumeric)
        } else if c == '.' || c == ',' {
            !current.is_empty() && prev.is_some_and(|p| p.is_ascii_digit()) && next.is_some_and(|n| n.is_ascii_digit())
        } else {
            false
        };

        if keep {
            current.push(c);
        } else if !current.is_empty() {
            words.push(Word::new(&current, words.is_empty()));
            current.clear();
        }
    }
    if !current.is_empty() {
        words.push(Word::new(&current, words.is_empty()));
    }
    words
}

/// Returns true when `word` is not familiar.
///
/// A word is familiar when it is numeric, when it is capitalized somewhere
/// other than the start of its sentence (treated as a proper noun), when its
/// normalized form is in the lexicon, or when one of its inflection stems is.
pub fn classify_difficult(word: &Word, lexicon: &Lexicon) -> bool {
    if word.is_numeric {
        return false;
    }
    if !word.sentence_initial && word.is_capitalized() {
        return false;
    }
    if lexicon.contains(&word.normalized) {
        return false;
    }
    !stem_candidates(&word.normalized).iter().any(|stem| lexicon.contains(stem))
}

/// Base forms to try for an inflected word: possessive, plural, past,
/// progressive, comparative and superlative endings, with consonant
/// un-doubling, final-e restoration and `i` -> `y`.
fn stem_candidates(word: &str) -> Vec<String> {
    let mut out = Vec::new();

    for possessive in ["'s", "'"] {
        if let Some(base) = word.strip_suffix(possessive) {
            if !base.is_empty() {
                out.push(base.to_string());
            }
        }
    }
    if let Some(base) = word.strip_suffix("ies") {
        if base.len() >= 2 {
            out.push(format!("{base}y"));
        }
    }
    if let Some(base) = word.strip_suffix("es") {
        if base.len() >= 2 {
            out.push(base.to_string());
        }
    }
    if let Some(base) = word.strip_suffix('s') {
        if base.len() >= 2 && !base.ends_with('s') {
            out.push(base.to_string());
        }
    }

    for suffix in ["ed", "ing", "er", "est"] {
        let Some(stem) = word.strip_suffix(suffix) else {
            continue;
        };
        if stem.chars().count() < 2 {
            continue;
        }
        out.push(stem.to_string());
        out.push(format!("{stem}e"));
        let mut tail = stem.chars().rev();
        if let (Some(a), Some(b)) = (tail.next(), tail.next()) {
            if a == b && !is_vowel(a) {
                out.push(stem[..stem.len() - a.len_utf8()].to_string());
            }
        }
        if suffix != "ing" {
            if let Some(base) = stem.strip_suffix('i') {
                out.push(format!("{base}y"));
            }
        }
    }
    out
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}
