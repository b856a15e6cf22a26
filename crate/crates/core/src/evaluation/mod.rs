//! Scoring sample sets, per-formula aggregates, baseline/candidate
//! comparison, rubric aggregation and report rendering.

mod report;
mod rubric;
mod stats;

pub use report::{render_report, ReportFormat, ReportInput};
pub use rubric::{
    aggregate_rubric, ingest_rubric, read_rubric, Chatbot, RubricAggregates, RubricCategory, RubricScore,
    RUBRIC_COLUMNS,
};
pub use stats::{summarize, SummaryStats};

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::readability::{Formula, ReadabilityScores};
use crate::text::{compute_metrics, Lexicon, TextMetrics};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot aggregate an empty set")]
    EmptySet,
    #[error("formula sets differ: baseline {baseline:?}, candidate {candidate:?}")]
    FormulaMismatch { baseline: Vec<Formula>, candidate: Vec<Formula> },
    #[error("row {row}: {column} = {value} is outside 1..=5")]
    OutOfRange { row: usize, column: String, value: i64 },
    #[error("malformed CSV at row {row}: {message}")]
    MalformedCsv { row: usize, message: String },
    #[error("CSV is missing column {0:?}")]
    MissingColumn(String),
    #[error("unknown report format {0:?} (expected md, csv or text)")]
    UnknownFormat(String),
    #[error("report has no sections")]
    EmptyReport,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSet {
    Corpus,
    BaselineModel,
    CandidateModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSample {
    pub sample_id: String,
    pub source_set: SampleSet,
    pub scores: ReadabilityScores,
    pub metrics: TextMetrics,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedSample {
    pub sample_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSet {
    pub samples: Vec<ScoredSample>,
    pub skipped: Vec<SkippedSample>,
}

/// Scores each `(id, text)` pair in parallel; output keeps input order.
/// Texts with nothing to score are listed in `skipped`.
pub fn score_set(samples: &[(String, String)], source_set: SampleSet, lexicon: &Lexicon) -> ScoredSet {
    let results: Vec<Result<ScoredSample, SkippedSample>> = samples
        .par_iter()
        .map(|(id, text)| {
            compute_metrics(text, lexicon)
                .map(|metrics| ScoredSample {
                    sample_id: id.clone(),
                    source_set,
                    scores: ReadabilityScores::from_metrics(&metrics),
                    metrics,
                })
                .map_err(|e| SkippedSample { sample_id: id.clone(), reason: e.to_string() })
        })
        .collect();
    let mut out = ScoredSet { samples: Vec::new(), skipped: Vec::new() };
    for r in results {
        match r {
            Ok(s) => out.samples.push(s),
            Err(s) => out.skipped.push(s),
        }
    }
    out
}

/// Per-formula summary of one sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub formulas: BTreeMap<Formula, SummaryStats>,
}

impl AggregateStats {
    pub fn from_columns(columns: BTreeMap<Formula, Vec<f64>>) -> Result<Self, EvalError> {
        let formulas = columns
            .into_iter()
            .map(|(f, values)| summarize(&values).map(|s| (f, s)).ok_or(EvalError::EmptySet))
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        if formulas.is_empty() {
            return Err(EvalError::EmptySet);
        }
        Ok(AggregateStats { formulas })
    }

    pub fn get(&self, formula: Formula) -> Option<&SummaryStats> {
        self.formulas.get(&formula)
    }
}

pub fn aggregate(scored: &[ScoredSample]) -> Result<AggregateStats, EvalError> {
    if scored.is_empty() {
        return Err(EvalError::EmptySet);
    }
    let columns = Formula::ALL
        .iter()
        .map(|&f| (f, scored.iter().map(|s| s.scores.get(f)).collect()))
        .collect();
    AggregateStats::from_columns(columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    MoreReadable,
    LessReadable,
    Unchanged,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::MoreReadable => "more readable",
            Direction::LessReadable => "less readable",
            Direction::Unchanged => "unchanged",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaDelta {
    pub formula: Formula,
    /// Candidate mean minus baseline mean.
    pub mean_delta: f64,
    /// Candidate SD minus baseline SD, when both exist.
    pub sd_delta: Option<f64>,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub deltas: Vec<FormulaDelta>,
}

/// Candidate minus baseline for every formula. Lower grade-style scores and
/// higher reading ease count as more readable.
pub fn compare(baseline: &AggregateStats, candidate: &AggregateStats) -> Result<ComparisonReport, EvalError> {
    let b_keys: Vec<Formula> = baseline.formulas.keys().copied().collect();
    let c_keys: Vec<Formula> = candidate.formulas.keys().copied().collect();
    if b_keys != c_keys {
        return Err(EvalError::FormulaMismatch { baseline: b_keys, candidate: c_keys });
    }
    let deltas = baseline
        .formulas
        .iter()
        .map(|(&formula, b)| {
            let c = &candidate.formulas[&formula];
            let mean_delta = c.mean - b.mean;
            let sd_delta = b.sd.zip(c.sd).map(|(bs, cs)| cs - bs);
            let easier = if formula.lower_is_easier() { mean_delta < 0.0 } else { mean_delta > 0.0 };
            let direction = if mean_delta == 0.0 {
                Direction::Unchanged
            } else if easier {
                Direction::MoreReadable
            } else {
                Direction::LessReadable
            };
            FormulaDelta { formula, mean_delta, sd_delta, direction }
        })
        .collect();
    Ok(ComparisonReport { deltas })
}

/// A named sample set and its aggregate, one row block of the readability
/// table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledAggregate {
    pub label: String,
    pub source_set: SampleSet,
    pub stats: AggregateStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledComparison {
    pub baseline: String,
    pub candidate: String,
    pub report: ComparisonReport,
}

/// Everything `evaluate` produces, persisted as JSON between pipeline steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub sets: Vec<LabeledAggregate>,
    pub comparisons: Vec<LabeledComparison>,
    pub skipped: Vec<SkippedSample>,
}
