//! The four readability formulas, their interpretation bands, and the
//! editorial compliance gate.
//!
//! Scores are unclamped: Flesch Reading Ease can exceed 100 or go negative,
//! grade levels can be negative. Rounding happens only when reports are
//! rendered.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{tokenize_words, Sentence, TextMetrics};

/// Minimum Flesch Reading Ease for compliant text.
pub const MIN_READING_EASE: f64 = 50.0;
/// Longest compliant sentence, in words.
pub const MAX_SENTENCE_WORDS: usize = 20;
/// Dale-Chall adds its constant only above this percentage of difficult words.
pub const DALE_CHALL_PDW_THRESHOLD: f64 = 5.0;
pub const DALE_CHALL_ADJUSTMENT: f64 = 3.6365;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    FleschKincaid,
    FleschReadingEase,
    AutomatedReadabilityIndex,
    DaleChall,
}

impl Formula {
    pub const ALL: [Formula; 4] = [
        Formula::FleschKincaid,
        Formula::FleschReadingEase,
        Formula::AutomatedReadabilityIndex,
        Formula::DaleChall,
    ];

    /// Column heading used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Formula::FleschKincaid => "Flesch-Kincaid",
            Formula::FleschReadingEase => "Flesch Readability",
            Formula::AutomatedReadabilityIndex => "ARI",
            Formula::DaleChall => "Dale-Chall",
        }
    }

    /// True when a lower score means easier text.
    pub fn lower_is_easier(self) -> bool {
        !matches!(self, Formula::FleschReadingEase)
    }

    pub fn evaluate(self, m: &TextMetrics) -> f64 {
        match self {
            Formula::FleschKincaid => flesch_kincaid(m),
            Formula::FleschReadingEase => flesch_reading_ease(m),
            Formula::AutomatedReadabilityIndex => automated_readability_index(m),
            Formula::DaleChall => dale_chall(m),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReadabilityError {
    #[error("{0} reports a grade level and has no bands")]
    UnknownFormula(Formula),
}

/// Flesch-Kincaid grade level: `0.39 ASL + 11.8 ASW - 15.59`.
pub fn flesch_kincaid(m: &TextMetrics) -> f64 {
    0.39 * m.asl + 11.8 * m.asw - 15.59
}

/// Flesch Reading Ease: `206.835 - 1.015 ASL - 84.6 ASW`.
pub fn flesch_reading_ease(m: &TextMetrics) -> f64 {
    206.835 - 1.015 * m.asl - 84.6 * m.asw
}

/// Automated Readability Index: `4.71 C/W + 0.5 W/S - 21.43`.
pub fn automated_readability_index(m: &TextMetrics) -> f64 {
    4.71 * m.acw + 0.5 * m.asl - 21.43
}

/// Dale-Chall: `0.1579 PDW + 0.0496 ASL`, plus 3.6365 when PDW is strictly
/// above 5%.
pub fn dale_chall(m: &TextMetrics) -> f64 {
    let raw = 0.1579 * m.pdw + 0.0496 * m.asl;
    if m.pdw > DALE_CHALL_PDW_THRESHOLD {
        raw + DALE_CHALL_ADJUSTMENT
    } else {
        raw
    }
}

// Lower bounds, descending. A score takes the first band whose bound it meets.
const FRE_BANDS: &[(f64, &str)] = &[
    (90.0, "very easy"),
    (80.0, "easy"),
    (70.0, "fairly easy"),
    (60.0, "plain"),
    (50.0, "standard"),
    (30.0, "difficult"),
    (f64::NEG_INFINITY, "scientific"),
];

const DALE_CHALL_BANDS: &[(f64, &str)] = &[
    (10.0, "graduate"),
    (9.0, "university"),
    (8.0, "grades 11-12"),
    (7.0, "grades 9-10"),
    (6.0, "grades 7-8"),
    (5.0, "grades 5-6"),
    (f64::NEG_INFINITY, "grade 4 and below"),
];

/// Interpretation band for a Flesch Reading Ease or Dale-Chall score.
pub fn band(formula: Formula, score: f64) -> Result<&'static str, ReadabilityError> {
    let table = match formula {
        Formula::FleschReadingEase => FRE_BANDS,
        Formula::DaleChall => DALE_CHALL_BANDS,
        other => return Err(ReadabilityError::UnknownFormula(other)),
    };
    Ok(table
        .iter()
        .find(|(lower, _)| score >= *lower)
        .map_or(table[table.len() - 1].1, |(_, label)| label))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityScores {
    pub fkgl: f64,
    pub fre: f64,
    pub ari: f64,
    pub dale_chall: f64,
    pub fre_band: String,
    pub dale_chall_band: String,
}

impl ReadabilityScores {
    pub fn from_metrics(m: &TextMetrics) -> Self {
        let fre = flesch_reading_ease(m);
        let dc = dale_chall(m);
        ReadabilityScores {
            fkgl: flesch_kincaid(m),
            fre,
            ari: automated_readability_index(m),
            dale_chall: dc,
            fre_band: band(Formula::FleschReadingEase, fre).unwrap().to_string(),
            dale_chall_band: band(Formula::DaleChall, dc).unwrap().to_string(),
        }
    }

    pub fn get(&self, formula: Formula) -> f64 {
        match formula {
            Formula::FleschKincaid => self.fkgl,
            Formula::FleschReadingEase => self.fre,
            Formula::AutomatedReadabilityIndex => self.ari,
            Formula::DaleChall => self.dale_chall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplianceReport {
    pub fre: f64,
    pub fre_ok: bool,
    /// `(sentence index, word count)` for each sentence over the limit.
    pub long_sentences: Vec<(usize, usize)>,
    /// `(sentence index, token)` for each contraction found.
    pub contractions: Vec<(usize, String)>,
    pub passed: bool,
}

/// Applies the editorial gate: reading ease of at least 50, no sentence over
/// 20 words, and no contractions.
pub fn check_compliance(m: &TextMetrics, sentences: &[Sentence]) -> ComplianceReport {
    let fre = flesch_reading_ease(m);
    let fre_ok = fre >= MIN_READING_EASE;
    let long_sentences: Vec<(usize, usize)> = sentences
        .iter()
        .filter(|s| s.word_count > MAX_SENTENCE_WORDS)
        .map(|s| (s.index, s.word_count))
        .collect();
    let contractions: Vec<(usize, String)> = sentences
        .iter()
        .flat_map(|s| {
            tokenize_words(&s.text)
                .into_iter()
                .filter(|w| is_contraction(&w.normalized))
                .map(move |w| (s.index, w.surface))
        })
        .collect();
    let passed = fre_ok && long_sentences.is_empty() && contractions.is_empty();
    ComplianceReport { fre, fre_ok, long_sentences, contractions, passed }
}

const CONTRACTION_ENDINGS: &[&str] = &["n't", "'re", "'ve", "'ll", "'d", "'m"];
const S_PRONOUNS: &[&str] = &[
    "it", "he", "she", "that", "there", "here", "what", "who", "where", "when", "why", "how", "let", "this",
];

/// Matches a normalized token (apostrophes already folded to `'`) against the
/// contraction patterns. `'s` counts only after a pronoun, so possessives such
/// as "England's" pass.
pub fn is_contraction(normalized: &str) -> bool {
    if normalized.contains("n't") || CONTRACTION_ENDINGS.iter().any(|e| normalized.ends_with(e)) {
        return true;
    }
    normalized
        .strip_suffix("'s")
        .is_some_and(|base| S_PRONOUNS.contains(&base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{compute_metrics, split_sentences, Lexicon};

    fn metrics(asl: f64, asw: f64, acw: f64, pdw: f64) -> TextMetrics {
        TextMetrics {
            sentence_count: 1,
            word_count: 1,
            syllable_count: 1,
            character_count: 1,
            difficult_word_count: 0,
            asl,
            asw,
            acw,
            pdw,
        }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn flesch_kincaid_values() {
        assert!(close(flesch_kincaid(&metrics(10.0, 1.5, 0.0, 0.0)), 6.01));
        assert!(close(flesch_kincaid(&metrics(1.0, 1.0, 0.0, 0.0)), -3.40));
        assert!(close(flesch_kincaid(&metrics(20.0, 1.7, 0.0, 0.0)), 12.27));
    }

    #[test]
    fn reading_ease_values() {
        assert!(close(flesch_reading_ease(&metrics(1.0, 1.0, 0.0, 0.0)), 121.22));
        assert!(close(flesch_reading_ease(&metrics(20.0, 1.6, 0.0, 0.0)), 51.175));
        assert!(close(flesch_reading_ease(&metrics(30.0, 2.0, 0.0, 0.0)), 7.185));
    }

    #[test]
    fn ari_values() {
        assert!(close(automated_readability_index(&metrics(20.0, 0.0, 5.0, 0.0)), 12.12));
        assert!(close(automated_readability_index(&metrics(10.0, 0.0, 4.0, 0.0)), 2.41));
        assert!(close(automated_readability_index(&metrics(25.0, 0.0, 6.0, 0.0)), 19.33));
    }

    #[test]
    fn dale_chall_values() {
        assert!(close(dale_chall(&metrics(10.0, 0.0, 0.0, 0.0)), 0.496));
        assert!(close(dale_chall(&metrics(15.0, 0.0, 0.0, 10.0)), 5.9595));
        assert!(close(dale_chall(&metrics(20.0, 0.0, 0.0, 20.0)), 7.7865));
    }

    #[test]
    fn dale_chall_boundary_is_exclusive() {
        let at = dale_chall(&metrics(10.0, 0.0, 0.0, 5.0));
        assert!(close(at, 0.1579 * 5.0 + 0.496));
        let above = dale_chall(&metrics(10.0, 0.0, 0.0, 5.0 + 1e-9));
        assert!(above > at + DALE_CHALL_ADJUSTMENT - 1e-6);
    }

    #[test]
    fn bands() {
        assert_eq!(band(Formula::FleschReadingEase, 55.0), Ok("standard"));
        assert_eq!(band(Formula::FleschReadingEase, 25.0), Ok("scientific"));
        assert_eq!(band(Formula::FleschReadingEase, 50.0), Ok("standard"));
        assert_eq!(band(Formula::FleschReadingEase, 60.0), Ok("plain"));
        assert_eq!(band(Formula::FleschReadingEase, 30.0), Ok("difficult"));
        assert_eq!(band(Formula::FleschReadingEase, 121.22), Ok("very easy"));
        assert_eq!(band(Formula::FleschReadingEase, -12.0), Ok("scientific"));
        assert_eq!(band(Formula::DaleChall, 9.5), Ok("university"));
        assert_eq!(band(Formula::DaleChall, 9.0), Ok("university"));
        assert_eq!(band(Formula::DaleChall, 10.0), Ok("graduate"));
        assert_eq!(band(Formula::DaleChall, 0.5), Ok("grade 4 and below"));
        assert_eq!(
            band(Formula::FleschKincaid, 8.0),
            Err(ReadabilityError::UnknownFormula(Formula::FleschKincaid))
        );
        assert!(band(Formula::AutomatedReadabilityIndex, 8.0).is_err());
    }

    #[test]
    fn contraction_patterns() {
        for yes in ["don't", "can't", "we're", "they've", "you'll", "i'd", "i'm", "it's", "that's", "let's"] {
            assert!(is_contraction(yes), "{yes}");
        }
        for no in ["england's", "owner's", "dont", "o'clock", "its", "rock'n'roll"] {
            assert!(!is_contraction(no), "{no}");
        }
    }

    fn check(text: &str) -> ComplianceReport {
        let lex = Lexicon::dale_chall();
        let m = compute_metrics(text, &lex).unwrap();
        check_compliance(&m, &split_sentences(text).unwrap())
    }

    #[test]
    fn compliance_flags_contraction() {
        let r = check("Don't delay repairs.");
        assert_eq!(r.contractions, vec![(0, "Don't".to_string())]);
        assert!(!r.passed);
    }

    #[test]
    fn compliance_flags_long_sentence() {
        let long = "The old barn by the red gate was built by a man who had a dog and a cat and a cow and a hen.";
        let r = check(&format!("We fixed the roof. {long}"));
        assert_eq!(r.long_sentences, vec![(1, 25)]);
        assert!(!r.passed);
    }

    #[test]
    fn compliance_passes_plain_text() {
        let r = check("We fixed the roof. The old barn is dry now. Come and see it.");
        assert!(r.fre_ok, "{}", r.fre);
        assert!(r.passed);
    }

    #[test]
    fn passed_requires_reading_ease() {
        let m = metrics(20.0, 1.6, 0.0, 0.0);
        let s = vec![Sentence { text: "Fine.".into(), word_count: 1, index: 0 }];
        let r = check_compliance(&m, &s);
        assert!(close(r.fre, 51.175));
        assert!(r.passed);
        let r = check_compliance(&metrics(30.0, 2.0, 0.0, 0.0), &s);
        assert!(!r.fre_ok && !r.passed);
    }
}
