use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::{summarize, SummaryStats};
use super::EvalError;

pub const RUBRIC_COLUMNS: [&str; 8] = [
    "sample_id",
    "rater_id",
    "chatbot",
    "style_tone",
    "clarity",
    "readability_accessibility",
    "diversity_inclusion",
    "overall_suitability",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Chatbot {
    #[serde(rename = "HAZEL")]
    Hazel,
    #[serde(rename = "ChatGPT")]
    ChatGpt,
}

impl Chatbot {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hazel" => Some(Chatbot::Hazel),
            "chatgpt" => Some(Chatbot::ChatGpt),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chatbot::Hazel => "HAZEL",
            Chatbot::ChatGpt => "ChatGPT",
        }
    }
}

impl fmt::Display for Chatbot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RubricCategory {
    StyleTone,
    Clarity,
    ReadabilityAccessibility,
    DiversityInclusion,
    OverallSuitability,
}

impl RubricCategory {
    pub const ALL: [RubricCategory; 5] = [
        RubricCategory::StyleTone,
        RubricCategory::Clarity,
        RubricCategory::ReadabilityAccessibility,
        RubricCategory::DiversityInclusion,
        RubricCategory::OverallSuitability,
    ];

    pub fn column(self) -> &'static str {
        RUBRIC_COLUMNS[3 + self as usize]
    }

    pub fn label(self) -> &'static str {
        match self {
            RubricCategory::StyleTone => "Style & Tone",
            RubricCategory::Clarity => "Clarity",
            RubricCategory::ReadabilityAccessibility => "Readability & Accessibility",
            RubricCategory::DiversityInclusion => "Diversity & Inclusion",
            RubricCategory::OverallSuitability => "Overall Suitability",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RubricScore {
    pub sample_id: String,
    pub rater_id: String,
    pub chatbot: Chatbot,
    pub style_tone: u8,
    pub clarity: u8,
    pub readability_accessibility: u8,
    pub diversity_inclusion: u8,
    pub overall_suitability: u8,
}

impl RubricScore {
    pub fn get(&self, category: RubricCategory) -> u8 {
        match category {
            RubricCategory::StyleTone => self.style_tone,
            RubricCategory::Clarity => self.clarity,
            RubricCategory::ReadabilityAccessibility => self.readability_accessibility,
            RubricCategory::DiversityInclusion => self.diversity_inclusion,
            RubricCategory::OverallSuitability => self.overall_suitability,
        }
    }
}

/// Parses rubric rows. Every category score must be an integer in 1..=5.
/// Row numbers count data rows from 1.
pub fn read_rubric<R: std::io::Read>(reader: R) -> Result<Vec<RubricScore>, EvalError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = r.headers().map_err(|e| EvalError::MalformedCsv { row: 0, message: e.to_string() })?.clone();
    let mut index = [0usize; 8];
    for (slot, name) in index.iter_mut().zip(RUBRIC_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| EvalError::MissingColumn(name.to_string()))?;
    }

    let mut out = Vec::new();
    for (i, record) in r.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| EvalError::MalformedCsv { row, message: e.to_string() })?;
        let field = |k: usize| {
            record
                .get(index[k])
                .ok_or_else(|| EvalError::MalformedCsv { row, message: format!("missing {}", RUBRIC_COLUMNS[k]) })
        };
        let chatbot_raw = field(2)?;
        let chatbot = Chatbot::parse(chatbot_raw)
            .ok_or_else(|| EvalError::MalformedCsv { row, message: format!("unknown chatbot {chatbot_raw:?}") })?;
        let mut scores = [0u8; 5];
        for (k, slot) in scores.iter_mut().enumerate() {
            let column = RUBRIC_COLUMNS[3 + k];
            let raw = field(3 + k)?;
            let value: i64 = raw
                .parse()
                .map_err(|_| EvalError::MalformedCsv { row, message: format!("{column} = {raw:?} is not an integer") })?;
            if !(1..=5).contains(&value) {
                return Err(EvalError::OutOfRange { row, column: column.to_string(), value });
            }
            *slot = value as u8;
        }
        out.push(RubricScore {
            sample_id: field(0)?.to_string(),
            rater_id: field(1)?.to_string(),
            chatbot,
            style_tone: scores[0],
            clarity: scores[1],
            readability_accessibility: scores[2],
            diversity_inclusion: scores[3],
            overall_suitability: scores[4],
        });
    }
    Ok(out)
}

pub fn ingest_rubric(path: impl AsRef<Path>) -> Result<Vec<RubricScore>, EvalError> {
    read_rubric(std::fs::File::open(path)?)
}

/// Per chatbot, per category summaries. Chatbots with no rows are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RubricAggregates {
    pub chatbots: BTreeMap<Chatbot, BTreeMap<RubricCategory, SummaryStats>>,
}

pub fn aggregate_rubric(scores: &[RubricScore]) -> Result<RubricAggregates, EvalError> {
    if scores.is_empty() {
        return Err(EvalError::EmptySet);
    }
    let mut grouped: BTreeMap<Chatbot, Vec<&RubricScore>> = BTreeMap::new();
    for s in scores {
        grouped.entry(s.chatbot).or_default().push(s);
    }
    let chatbots = grouped
        .into_iter()
        .map(|(bot, rows)| {
            let per_category = RubricCategory::ALL
                .iter()
                .map(|&c| {
                    let values: Vec<f64> = rows.iter().map(|r| f64::from(r.get(c))).collect();
                    (c, summarize(&values).expect("group is non-empty"))
                })
                .collect();
            (bot, per_category)
        })
        .collect();
    Ok(RubricAggregates { chatbots })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "sample_id,rater_id,chatbot,style_tone,clarity,readability_accessibility,diversity_inclusion,overall_suitability\n";

    #[test]
    fn parses_rows() {
        let csv = format!("{HEADER}s1,r1,HAZEL,4,4,5,3,4\ns2,r1,chatgpt,3,5,4,4,3\n");
        let rows = read_rubric(csv.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].chatbot, Chatbot::Hazel);
        assert_eq!(rows[1].chatbot, Chatbot::ChatGpt);
        assert_eq!(rows[0].get(RubricCategory::ReadabilityAccessibility), 5);
    }

    #[test]
    fn out_of_range() {
        let csv = format!("{HEADER}s1,r1,HAZEL,4,6,5,3,4\n");
        match read_rubric(csv.as_bytes()) {
            Err(EvalError::OutOfRange { row: 1, column, value: 6 }) => assert_eq!(column, "clarity"),
            other => panic!("{other:?}"),
        }
        let csv = format!("{HEADER}s1,r1,HAZEL,0,4,5,3,4\n");
        assert!(matches!(read_rubric(csv.as_bytes()), Err(EvalError::OutOfRange { .. })));
    }

    #[test]
    fn malformed_rows() {
        let csv = format!("{HEADER}s1,r1,HAZEL,4,4,5,3,4\ns2,r1,HAZEL,four,4,5,3,4\n");
        assert!(matches!(read_rubric(csv.as_bytes()), Err(EvalError::MalformedCsv { row: 2, .. })));
        let csv = format!("{HEADER}s1,r1,Bard,4,4,5,3,4\n");
        assert!(matches!(read_rubric(csv.as_bytes()), Err(EvalError::MalformedCsv { row: 1, .. })));
        let csv = format!("{HEADER}s1,r1,HAZEL,4,4\n");
        assert!(matches!(read_rubric(csv.as_bytes()), Err(EvalError::MalformedCsv { row: 1, .. })));
        let csv = "sample_id,rater_id,chatbot\n";
        assert!(matches!(read_rubric(csv.as_bytes()), Err(EvalError::MissingColumn(c)) if c == "style_tone"));
    }

    fn score(bot: Chatbot, v: u8) -> RubricScore {
        RubricScore {
            sample_id: "s".into(),
            rater_id: "r".into(),
            chatbot: bot,
            style_tone: v,
            clarity: v,
            readability_accessibility: v,
            diversity_inclusion: v,
            overall_suitability: v,
        }
    }

    #[test]
    fn identical_scores_have_zero_sd() {
        let rows = vec![score(Chatbot::Hazel, 4); 6];
        let agg = aggregate_rubric(&rows).unwrap();
        let hazel = &agg.chatbots[&Chatbot::Hazel];
        assert!(hazel.values().all(|s| s.sd == Some(0.0) && s.mean == 4.0));
        assert!(!agg.chatbots.contains_key(&Chatbot::ChatGpt));
    }

    #[test]
    fn readability_accessibility_cell() {
        // 14 fours and a five: mean 61/15 = 4.0667.
        let mut rows = vec![score(Chatbot::Hazel, 4); 14];
        rows.push(score(Chatbot::Hazel, 5));
        let agg = aggregate_rubric(&rows).unwrap();
        let cell = agg.chatbots[&Chatbot::Hazel][&RubricCategory::ReadabilityAccessibility];
        assert_eq!(format!("{:.2}", cell.mean), "4.07");
        assert_eq!(cell.median, 4.0);
    }

    #[test]
    fn empty_is_error() {
        assert!(matches!(aggregate_rubric(&[]), Err(EvalError::EmptySet)));
    }
}
