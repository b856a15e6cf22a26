//! The `hazelkit` command line.
//!
//! [`run`] is the whole program minus process setup, so tests can drive it
//! in-process and inspect the network-call counter afterwards.

mod commands;
pub mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hazelkit::evaluation::ReportFormat;

pub use config::{Config, DEFAULT_CONFIG};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hazelkit", version, about = "Readability scoring and model revision workflow for guidance text")]
pub struct Cli {
    /// Project config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed for `sample` and `split`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format: md, csv or text.
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<ReportFormat>,
    /// Serve API calls from the fixture directory; never touch the network.
    #[arg(long, global = true)]
    pub offline: bool,
    /// Call the live API and save every response as a fixture.
    #[arg(long, global = true, conflicts_with = "offline")]
    pub record: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: hazelkit::evaluation::EvalError| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the documents a corpus directory yields.
    Ingest {
        /// Corpus directory; defaults to `corpus_dir` from the config.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Draw sentence-aligned excerpts from the corpus as CSV.
    Sample(SampleArgs),
    /// Score files, directories of `.txt` files, or standard input (`-`).
    Score {
        files: Vec<PathBuf>,
    },
    /// Check texts against the editorial rules; exits 1 if any fail.
    Check {
        files: Vec<PathBuf>,
    },
    /// Turn revised excerpts into a fine-tuning JSONL file.
    BuildDataset {
        #[arg(long)]
        excerpts: PathBuf,
        #[arg(long, default_value = "plain-english")]
        template: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split a JSONL dataset into train.jsonl and test.jsonl.
    Split {
        input: PathBuf,
        /// Fraction of records for training; defaults to `split_ratio`.
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Check a JSONL dataset against the fine-tuning schema.
    Validate {
        file: PathBuf,
    },
    /// Upload a dataset and start, or inspect, a fine-tuning job.
    Finetune {
        #[command(subcommand)]
        action: FinetuneAction,
    },
    /// Ask a model to revise excerpts; writes them back with `revised_text`.
    Revise {
        #[arg(long)]
        excerpts: PathBuf,
        /// Only revise excerpts listed in this file, one id per line.
        #[arg(long)]
        ids: Option<PathBuf>,
        #[arg(long, default_value = "plain-english")]
        template: String,
        /// Defaults to `api.model`.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score excerpt sets and compare model revisions against the originals.
    Evaluate(EvaluateArgs),
    /// Render an evaluation summary and/or rubric scores as tables.
    Report {
        #[arg(long)]
        evaluation: Option<PathBuf>,
        #[arg(long)]
        rubric: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub dir: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "min")]
    pub min_words: Option<usize>,
    #[arg(long = "max")]
    pub max_words: Option<usize>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Excerpt CSV whose `text` column is the original corpus.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Excerpt CSV whose `revised_text` column holds baseline revisions.
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    /// Excerpt CSV whose `revised_text` column holds candidate revisions.
    #[arg(long)]
    pub candidate: Option<PathBuf>,
    #[arg(long, default_value = "Corpus")]
    pub corpus_label: String,
    #[arg(long, default_value = "Baseline")]
    pub baseline_label: String,
    #[arg(long, default_value = "Candidate")]
    pub candidate_label: String,
    /// Write the JSON summary here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FinetuneAction {
    /// Validate and upload a training file, then create a job.
    Submit {
        file: PathBuf,
        /// Base model; defaults to `api.model`.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        epochs: Option<u32>,
        #[arg(long)]
        batch_size: Option<u32>,
    },
    /// Show a job, optionally waiting for it to finish.
    Status {
        job_id: String,
        #[arg(long)]
        wait: bool,
        /// Seconds between polls.
        #[arg(long, default_value_t = 30)]
        interval: u64,
        /// Seconds before giving up.
        #[arg(long, default_value_t = 7200)]
        timeout: u64,
    },
}

/// Runs the CLI with `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_FAILURE
        }
    }
}
