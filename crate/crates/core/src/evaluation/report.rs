use std::fmt::Write as _;
use std::str::FromStr;

use super::rubric::{RubricAggregates, RubricCategory};
use super::stats::SummaryStats;
use super::{EvalError, LabeledAggregate, LabeledComparison};
use crate::readability::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "text" | "txt" | "plain" => Ok(ReportFormat::Text),
            _ => Err(EvalError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReportInput {
    /// One row block per set, in display order.
    pub sets: Vec<LabeledAggregate>,
    pub comparisons: Vec<LabeledComparison>,
    pub rubric: Option<RubricAggregates>,
}

enum Row {
    Block(String),
    Cells(Vec<String>),
}

struct Table {
    title: String,
    header: Vec<String>,
    rows: Vec<Row>,
}

/// Two decimals, with negative zero printed as zero.
fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn signed(x: f64) -> String {
    let s = num(x);
    if x > 0.0 && s != "0.00" {
        format!("+{s}")
    } else {
        s
    }
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map_or_else(|| "n/a".into(), f)
}

const STAT_ROWS: [(&str, &str); 3] = [("Mean", "mean"), ("Median", "median"), ("Standard deviation", "sd")];

fn stat(s: &SummaryStats, key: &str) -> Option<f64> {
    match key {
        "mean" => Some(s.mean),
        "median" => Some(s.median),
        _ => s.sd,
    }
}

fn formula_columns(sets: &[LabeledAggregate]) -> Vec<Formula> {
    let mut cols: Vec<Formula> = sets.iter().flat_map(|s| s.stats.formulas.keys().copied()).collect();
    cols.sort();
    cols.dedup();
    cols
}

fn rubric_block(bot: super::Chatbot) -> String {
    format!("{}-produced", bot.name())
}

fn tables(input: &ReportInput) -> Vec<Table> {
    let mut out = Vec::new();

    if !input.sets.is_empty() {
        let cols = formula_columns(&input.sets);
        let mut header = vec!["Sample".to_string()];
        header.extend(cols.iter().map(|f| f.label().to_string()));
        let mut rows = Vec::new();
        for set in &input.sets {
            rows.push(Row::Block(set.label.clone()));
            for (label, key) in STAT_ROWS {
                let mut cells = vec![label.to_string()];
                cells.extend(cols.iter().map(|f| opt(set.stats.get(*f).and_then(|s| stat(s, key)), num)));
                rows.push(Row::Cells(cells));
            }
        }
        out.push(Table { title: "Readability scores".into(), header, rows });
    }

    for cmp in &input.comparisons {
        let header = ["Formula", "Mean change", "SD change", "Direction"].map(String::from).to_vec();
        let rows = cmp
            .report
            .deltas
            .iter()
            .map(|d| {
                Row::Cells(vec![
                    d.formula.label().to_string(),
                    signed(d.mean_delta),
                    opt(d.sd_delta, signed),
                    d.direction.to_string(),
                ])
            })
            .collect();
        out.push(Table { title: format!("Comparison: {} vs {}", cmp.baseline, cmp.candidate), header, rows });
    }

    if let Some(rubric) = input.rubric.as_ref().filter(|r| !r.chatbots.is_empty()) {
        let mut header = vec!["Sample".to_string()];
        header.extend(RubricCategory::ALL.iter().map(|c| c.label().to_string()));
        let mut rows = Vec::new();
        for (bot, cats) in &rubric.chatbots {
            rows.push(Row::Block(rubric_block(*bot)));
            for (label, key) in STAT_ROWS {
                let mut cells = vec![label.to_string()];
                cells.extend(RubricCategory::ALL.iter().map(|c| opt(cats.get(c).and_then(|s| stat(s, key)), num)));
                rows.push(Row::Cells(cells));
            }
        }
        out.push(Table { title: "Rubric scores".into(), header, rows });
    }
    out
}

fn markdown(tables: &[Table]) -> String {
    let mut s = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "## {}\n", t.title);
        let _ = writeln!(s, "| {} |", t.header.join(" | "));
        let align: Vec<&str> = (0..t.header.len()).map(|i| if i == 0 { "---" } else { "---:" }).collect();
        let _ = writeln!(s, "|{}|", align.join("|"));
        for row in &t.rows {
            match row {
                Row::Block(label) => {
                    let _ = writeln!(s, "| **{label}** |{}", " |".repeat(t.header.len() - 1));
                }
                Row::Cells(cells) => {
                    let _ = writeln!(s, "| {} |", cells.join(" | "));
                }
            }
        }
    }
    s
}

fn plain(tables: &[Table]) -> String {
    let mut s = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
        for row in &t.rows {
            match row {
                Row::Block(label) => widths[0] = widths[0].max(label.chars().count()),
                Row::Cells(cells) => {
                    for (w, c) in widths.iter_mut().zip(cells) {
                        *w = (*w).max(c.chars().count());
                    }
                }
            }
        }
        let line = |cells: &[String]| -> String {
            cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let _ = writeln!(s, "{}\n{}", t.title, "=".repeat(t.title.chars().count()));
        let _ = writeln!(s, "{}", line(&t.header));
        let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        let _ = writeln!(s, "{}", "-".repeat(total));
        for row in &t.rows {
            match row {
                Row::Block(label) => {
                    let _ = writeln!(s, "{label}");
                }
                Row::Cells(cells) => {
                    let _ = writeln!(s, "{}", line(cells));
                }
            }
        }
    }
    s
}

/// Long-format CSV: `table,block,statistic,column,value`.
fn csv_long(input: &ReportInput) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut put = |fields: [&str; 5]| w.write_record(fields).expect("in-memory write");
    put(["table", "block", "statistic", "column", "value"]);

    let cols = formula_columns(&input.sets);
    for set in &input.sets {
        for (_, key) in STAT_ROWS {
            for f in &cols {
                let v = set.stats.get(*f).and_then(|s| stat(s, key)).map(num).unwrap_or_default();
                put(["readability", &set.label, key, f.label(), &v]);
            }
        }
    }
    for cmp in &input.comparisons {
        let block = format!("{} vs {}", cmp.baseline, cmp.candidate);
        for d in &cmp.report.deltas {
            put(["comparison", &block, "mean_delta", d.formula.label(), &num(d.mean_delta)]);
            put(["comparison", &block, "sd_delta", d.formula.label(), &d.sd_delta.map(num).unwrap_or_default()]);
            put(["comparison", &block, "direction", d.formula.label(), &d.direction.to_string()]);
        }
    }
    if let Some(rubric) = &input.rubric {
        for (bot, cats) in &rubric.chatbots {
            let block = rubric_block(*bot);
            for (_, key) in STAT_ROWS {
                for c in RubricCategory::ALL {
                    let v = cats.get(&c).and_then(|s| stat(s, key)).map(num).unwrap_or_default();
                    put(["rubric", &block, key, c.label(), &v]);
                }
            }
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Renders whichever sections are present. Numbers are rounded to two
/// decimals here and nowhere else.
pub fn render_report(input: &ReportInput, format: ReportFormat) -> Result<String, EvalError> {
    let tables = tables(input);
    if tables.is_empty() {
        return Err(EvalError::EmptyReport);
    }
    Ok(match format {
        ReportFormat::Markdown => markdown(&tables),
        ReportFormat::Text => plain(&tables),
        ReportFormat::Csv => csv_long(input),
    })
}
