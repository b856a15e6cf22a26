use serde::{Deserialize, Serialize};

use super::word::tokenize_words;
use super::TextError;

/// Abbreviations whose trailing period never ends a sentence. Compared
/// lowercase, without the final period.
pub const ABBREVIATIONS: &[&str] = &["mr", "mrs", "dr", "st", "e.g", "i.e", "etc", "no", "fig", "vol"];

const TERMINATORS: &[char] = &['.', '!', '?'];
const CLOSERS: &[char] = &['"', '\'', ')', ']', '”', '’', '»'];
const OPENERS: &[char] = &['"', '\'', '(', '[', '“', '‘', '«'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub text: String,
    pub word_count: usize,
    /// Ordinal position of the sentence in its source text.
    pub index: usize,
}

/// Splits `text` into sentences.
///
/// A boundary is a run of `.`, `!` or `?` (plus any closing quotes or
/// brackets) followed by end-of-input, or by whitespace and an uppercase
/// letter (optionally behind an opening quote). A period after one of
/// [`ABBREVIATIONS`] or between two digits never splits. Fragments without
/// any word are folded into a neighbouring sentence so every sentence has at
/// least one word.
pub fn split_sentences(text: &str) -> Result<Vec<Sentence>, TextError> {
    if !text.chars().any(char::is_alphabetic) {
        return Err(TextError::EmptyText);
    }

    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pieces: Vec<&str> = Vec::new();
    let mut seg_start = 0usize;
    let mut i = 0usize;

    while i < chars.len() {
        let c = chars[i].1;
        if !TERMINATORS.contains(&c) {
            i += 1;
            continue;
        }
        if c == '.' && is_decimal_point(&chars, i) {
            i += 1;
            continue;
        }

        let mut j = i + 1;
        while j < chars.len() && (TERMINATORS.contains(&chars[j].1) || CLOSERS.contains(&chars[j].1)) {
            j += 1;
        }

        let boundary = boundary_follows(&chars, j) && !(c == '.' && ends_with_abbreviation(&chars, i));
        if boundary {
            let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
            pieces.push(&text[seg_start..end]);
            seg_start = end;
        }
        i = j;
    }
    if seg_start < text.len() {
        pieces.push(&text[seg_start..]);
    }

    Ok(assemble(pieces))
}

fn is_decimal_point(chars: &[(usize, char)], i: usize) -> bool {
    i > 0 && i + 1 < chars.len() && chars[i - 1].1.is_ascii_digit() && chars[i + 1].1.is_ascii_digit()
}

fn boundary_follows(chars: &[(usize, char)], j: usize) -> bool {
    let mut k = j;
    if k < chars.len() && !chars[k].1.is_whitespace() {
        return false;
    }
    while k < chars.len() && chars[k].1.is_whitespace() {
        k += 1;
    }
    if k == chars.len() {
        return true;
    }
    while k < chars.len() && OPENERS.contains(&chars[k].1) {
        k += 1;
    }
    k < chars.len() && chars[k].1.is_uppercase()
}

fn ends_with_abbreviation(chars: &[(usize, char)], period: usize) -> bool {
    let mut k = period;
    while k > 0 && (chars[k - 1].1.is_alphanumeric() || chars[k - 1].1 == '.') {
        k -= 1;
    }
    let token: String = chars[k..period].iter().map(|&(_, c)| c).collect::<String>().to_lowercase();
    let token = token.trim_matches('.');
    !token.is_empty() && ABBREVIATIONS.contains(&token)
}

fn assemble(pieces: Vec<&str>) -> Vec<Sentence> {
    let mut texts: Vec<String> = Vec::new();
    let mut pending = String::new();

    for piece in pieces {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        if tokenize_words(piece).is_empty() {
            match texts.last_mut() {
                Some(last) => {
                    last.push(' ');
                    last.push_str(piece);
                }
                None => {
                    pending.push_str(piece);
                    pending.push(' ');
                }
            }
            continue;
        }
        let mut text = std::mem::take(&mut pending);
        text.push_str(piece);
        texts.push(text);
    }

    texts
        .into_iter()
        .enumerate()
        .map(|(index, text)| Sentence {
            word_count: tokenize_words(&text).len(),
            text,
            index,
        })
        .collect()
}
