use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use hazelkit::corpus::{ingest_dir, load_excerpts, sample_excerpts, write_excerpts, Excerpt, SampleParams};
use hazelkit::dataset::{build_records, read_jsonl, split_records, validate_jsonl, write_jsonl, TrainingRecord};
use hazelkit::evaluation::{
    aggregate, compare, ingest_rubric, aggregate_rubric, render_report, score_set, EvaluationSummary,
    LabeledAggregate, LabeledComparison, ReportFormat, ReportInput, SampleSet,
};
use hazelkit::llm::{
    ApiClient, ClientSettings, LiveTransport, LlmError, RecordingTransport, ReplayTransport, RetryPolicy, Transport,
};
use hazelkit::prompt::TemplateSet;
use hazelkit::readability::{check_compliance, ReadabilityScores, MAX_SENTENCE_WORDS, MIN_READING_EASE};
use hazelkit::text::{compute_metrics, split_sentences, Lexicon};

use crate::config::{Config, DEFAULT_CONFIG};
use crate::output::render_table;
use crate::{Cli, Command, EvaluateArgs, FinetuneAction, SampleArgs, EXIT_FAILURE, EXIT_OK};

struct Ctx<'a> {
    config: Config,
    seed: Option<u64>,
    format: Option<ReportFormat>,
    offline: bool,
    record: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

pub fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let (path, explicit) = match &cli.config {
        Some(p) => (p.clone(), true),
        None => (PathBuf::from(DEFAULT_CONFIG), false),
    };
    let config = Config::load(&path, explicit)?;
    config.validate()?;
    let mut ctx = Ctx { config, seed: cli.seed, format: cli.format, offline: cli.offline, record: cli.record, out, err };
    match cli.command {
        Command::Ingest { dir } => ctx.ingest(dir),
        Command::Sample(args) => ctx.sample(args),
        Command::Score { files } => ctx.score(&files),
        Command::Check { files } => ctx.check(&files),
        Command::BuildDataset { excerpts, template, out } => ctx.build_dataset(&excerpts, &template, &out),
        Command::Split { input, ratio, out_dir } => ctx.split(&input, ratio, &out_dir),
        Command::Validate { file } => ctx.validate(&file),
        Command::Finetune { action } => ctx.finetune(action),
        Command::Revise { excerpts, ids, template, model, out } => {
            ctx.revise(&excerpts, ids.as_deref(), &template, model, &out)
        }
        Command::Evaluate(args) => ctx.evaluate(args),
        Command::Report { evaluation, rubric, out } => ctx.report(evaluation.as_deref(), rubric.as_deref(), out.as_deref()),
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Excerpt ids ride alongside a JSONL file in `<name>.ids`, one per line,
/// because the wire format has no room for them.
pub fn ids_path(jsonl: &Path) -> PathBuf {
    jsonl.with_extension("ids")
}

fn write_ids(jsonl: &Path, records: &[TrainingRecord]) -> anyhow::Result<()> {
    let mut body = String::new();
    for r in records {
        body.push_str(r.excerpt_id.as_deref().unwrap_or(""));
        body.push('\n');
    }
    let path = ids_path(jsonl);
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn read_ids(path: &Path) -> anyhow::Result<Vec<String>> {
    let body = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(body.lines().map(str::to_string).collect())
}

fn write_output(path: Option<&Path>, contents: &[u8], out: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            std::fs::write(p, contents).with_context(|| format!("writing {}", p.display()))
        }
        None => out.write_all(contents).context("writing output"),
    }
}

/// Expands the `score`/`check` operands: `-` (or nothing) is standard
/// input, directories contribute every `.txt` file beneath them.
fn gather_inputs(files: &[PathBuf]) -> anyhow::Result<Vec<(String, String)>> {
    let mut inputs = Vec::new();
    if files.is_empty() {
        inputs.push(("-".to_string(), read_stdin()?));
        return Ok(inputs);
    }
    for f in files {
        if f.as_os_str() == "-" {
            inputs.push(("-".to_string(), read_stdin()?));
        } else if f.is_dir() {
            let mut found = Vec::new();
            collect_txt(f, &mut found)?;
            found.sort();
            for p in found {
                let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                inputs.push((p.display().to_string(), text));
            }
        } else {
            let text = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            inputs.push((f.display().to_string(), text));
        }
    }
    Ok(inputs)
}

fn read_stdin() -> anyhow::Result<String> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
    Ok(s)
}

fn collect_txt(dir: &Path, found: &mut Vec<PathBuf>) -> anyhow::Result<()> {
    for entry in std::fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.is_dir() {
            collect_txt(&path, found)?;
        } else if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("txt")) {
            found.push(path);
        }
    }
    Ok(())
}

impl Ctx<'_> {
    fn lexicon(&self) -> anyhow::Result<Lexicon> {
        match &self.config.lexicon_path {
            Some(p) => Lexicon::from_file(p).with_context(|| format!("loading lexicon {}", p.display())),
            None => Ok(Lexicon::dale_chall()),
        }
    }

    fn templates(&self) -> anyhow::Result<TemplateSet> {
        match &self.config.templates_dir {
            Some(dir) => Ok(TemplateSet::with_dir(dir)?),
            None => Ok(TemplateSet::builtin()),
        }
    }

    fn corpus_dir(&self, dir: Option<PathBuf>) -> anyhow::Result<PathBuf> {
        dir.or_else(|| self.config.corpus_dir.clone())
            .ok_or_else(|| anyhow!("no corpus directory: pass --dir or set corpus_dir in the config"))
    }

    fn client(&self) -> anyhow::Result<ApiClient> {
        let api = &self.config.api;
        let fixtures = || {
            api.fixtures_dir
                .clone()
                .ok_or_else(|| anyhow!("api.fixtures_dir must be set for --offline and --record"))
        };
        let live = || LiveTransport::new(api.base_url.clone(), Duration::from_secs(api.timeout_secs));
        let transport: Arc<dyn Transport> = if self.offline {
            Arc::new(ReplayTransport::new(fixtures()?)?)
        } else if self.record {
            Arc::new(RecordingTransport::new(live()?, fixtures()?))
        } else {
            Arc::new(live()?)
        };
        let settings = ClientSettings {
            api_key: None,
            system_message: self.config.system_message.clone(),
            temperature: api.temperature,
            max_output_tokens: api.max_output_tokens,
            max_in_flight: api.max_in_flight,
            retry: RetryPolicy { max_attempts: api.max_attempts.max(1), ..RetryPolicy::default() },
            templates: self.templates()?,
        }
        .api_key_from_env();
        Ok(ApiClient::new(transport, settings))
    }

    fn ingest(&mut self, dir: Option<PathBuf>) -> anyhow::Result<i32> {
        let dir = self.corpus_dir(dir)?;
        let ingested = ingest_dir(&dir)?;
        for s in &ingested.skipped {
            writeln!(self.err, "skipped {}: {}", s.path.display(), s.reason)?;
        }
        let rows: Vec<Vec<String>> = ingested
            .documents
            .iter()
            .map(|d| vec![d.id.clone(), d.word_count.to_string(), d.title.clone().unwrap_or_default()])
            .collect();
        let format = self.format.unwrap_or(ReportFormat::Text);
        write!(self.out, "{}", render_table(&["Document", "Words", "Title"], &rows, format))?;
        Ok(EXIT_OK)
    }

    fn sample(&mut self, args: SampleArgs) -> anyhow::Result<i32> {
        let dir = self.corpus_dir(args.dir)?;
        let defaults = self.config.sample;
        let params = SampleParams {
            n: args.n.unwrap_or(defaults.n),
            min_words: args.min_words.unwrap_or(defaults.min_words),
            max_words: args.max_words.unwrap_or(defaults.max_words),
            seed: self.seed.unwrap_or(defaults.seed),
        };
        let ingested = ingest_dir(&dir)?;
        for s in &ingested.skipped {
            writeln!(self.err, "skipped {}: {}", s.path.display(), s.reason)?;
        }
        let excerpts = sample_excerpts(&ingested.documents, params)?;
        let mut buf = Vec::new();
        write_excerpts(&excerpts, &mut buf)?;
        write_output(args.out.as_deref(), &buf, self.out)?;
        Ok(EXIT_OK)
    }

    fn score(&mut self, files: &[PathBuf]) -> anyhow::Result<i32> {
        let lexicon = self.lexicon()?;
        let mut rows = Vec::new();
        let mut failures = 0;
        for (name, text) in gather_inputs(files)? {
            match compute_metrics(&text, &lexicon) {
                Ok(m) => {
                    let s = ReadabilityScores::from_metrics(&m);
                    rows.push(vec![
                        name,
                        num(s.fkgl),
                        num(s.fre),
                        num(s.ari),
                        num(s.dale_chall),
                        s.fre_band.to_string(),
                        s.dale_chall_band.to_string(),
                    ]);
                }
                Err(e) => {
                    writeln!(self.err, "{name}: {e}")?;
                    failures += 1;
                }
            }
        }
        let header =
            ["File", "Flesch-Kincaid", "Flesch Readability", "ARI", "Dale-Chall", "Reading ease band", "Dale-Chall band"];
        if !rows.is_empty() {
            let format = self.format.unwrap_or(ReportFormat::Text);
            write!(self.out, "{}", render_table(&header, &rows, format))?;
        }
        Ok(if failures > 0 { EXIT_FAILURE } else { EXIT_OK })
    }

    fn check(&mut self, files: &[PathBuf]) -> anyhow::Result<i32> {
        let lexicon = self.lexicon()?;
        let mut all_passed = true;
        for (name, text) in gather_inputs(files)? {
            let metrics = compute_metrics(&text, &lexicon);
            let sentences = split_sentences(&text);
            let (metrics, sentences) = match (metrics, sentences) {
                (Ok(m), Ok(s)) => (m, s),
                (Err(e), _) | (_, Err(e)) => {
                    writeln!(self.out, "FAIL {name}\n  {e}")?;
                    all_passed = false;
                    continue;
                }
            };
            let report = check_compliance(&metrics, &sentences);
            all_passed &= report.passed;
            writeln!(self.out, "{} {name} (reading ease {})", if report.passed { "PASS" } else { "FAIL" }, num(report.fre))?;
            if !report.fre_ok {
                writeln!(self.out, "  reading ease {} is below {MIN_READING_EASE}", num(report.fre))?;
            }
            for (index, words) in &report.long_sentences {
                writeln!(self.out, "  sentence {index}: {words} words (limit {MAX_SENTENCE_WORDS})")?;
            }
            for (index, token) in &report.contractions {
                writeln!(self.out, "  sentence {index}: contraction \"{token}\"")?;
            }
        }
        Ok(if all_passed { EXIT_OK } else { EXIT_FAILURE })
    }

    fn build_dataset(&mut self, excerpts: &Path, template: &str, out: &Path) -> anyhow::Result<i32> {
        let templates = self.templates()?;
        let template = templates.get(template)?;
        let excerpts = load_excerpts(excerpts)?;
        let records = build_records(&excerpts, &self.config.system_message, template)?;
        write_jsonl(&records, out)?;
        write_ids(out, &records)?;
        let report = validate_jsonl(out)?;
        if !report.passed {
            bail!("built dataset failed validation:\n{report}");
        }
        writeln!(self.err, "wrote {} records to {}", records.len(), out.display())?;
        Ok(EXIT_OK)
    }

    fn split(&mut self, input: &Path, ratio: Option<f64>, out_dir: &Path) -> anyhow::Result<i32> {
        let mut records = read_jsonl(input)?;
        let sidecar = ids_path(input);
        if sidecar.is_file() {
            let ids = read_ids(&sidecar)?;
            if ids.len() != records.len() {
                bail!("{} lists {} ids for {} records", sidecar.display(), ids.len(), records.len());
            }
            for (r, id) in records.iter_mut().zip(ids) {
                r.excerpt_id = Some(id).filter(|s| !s.is_empty());
            }
        }
        let ratio = ratio.unwrap_or(self.config.split_ratio);
        let seed = self.seed.unwrap_or(self.config.sample.seed);
        let split = split_records(records, ratio, seed)?;
        std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
        for (name, part) in [("train.jsonl", &split.train), ("test.jsonl", &split.test)] {
            let path = out_dir.join(name);
            write_jsonl(part, &path)?;
            write_ids(&path, part)?;
        }
        writeln!(self.err, "train {} / test {} (ratio {ratio}, seed {seed})", split.train.len(), split.test.len())?;
        Ok(EXIT_OK)
    }

    fn validate(&mut self, file: &Path) -> anyhow::Result<i32> {
        let report = validate_jsonl(file)?;
        write!(self.out, "{report}")?;
        Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE })
    }

    fn finetune(&mut self, action: FinetuneAction) -> anyhow::Result<i32> {
        let client = self.client()?;
        let job = match action {
            FinetuneAction::Submit { file, model, epochs, batch_size } => {
                let model = model.unwrap_or_else(|| self.config.api.model.clone());
                let file_id = match client.upload_training_file(&file) {
                    Err(LlmError::ValidationRefused(report)) => {
                        write!(self.err, "{} failed validation, nothing uploaded:\n{report}", file.display())?;
                        return Ok(EXIT_FAILURE);
                    }
                    other => other?,
                };
                client.submit_finetune(&file_id, &model, epochs, batch_size)?
            }
            FinetuneAction::Status { job_id, wait, interval, timeout } => {
                if wait {
                    client.poll_job(&job_id, Duration::from_secs(interval), Duration::from_secs(timeout))?
                } else {
                    client.get_job(&job_id)?
                }
            }
        };
        writeln!(self.out, "{}", serde_json::to_string_pretty(&job)?)?;
        Ok(EXIT_OK)
    }

    fn revise(
        &mut self,
        excerpts_path: &Path,
        ids: Option<&Path>,
        template: &str,
        model: Option<String>,
        out: &Path,
    ) -> anyhow::Result<i32> {
        let mut excerpts = load_excerpts(excerpts_path)?;
        if let Some(ids_file) = ids {
            let by_id: HashMap<String, Excerpt> = excerpts.into_iter().map(|e| (e.id.clone(), e)).collect();
            excerpts = read_ids(ids_file)?
                .into_iter()
                .filter(|id| !id.is_empty())
                .map(|id| by_id.get(&id).cloned().ok_or_else(|| anyhow!("excerpt {id:?} not in {}", excerpts_path.display())))
                .collect::<anyhow::Result<_>>()?;
        }
        let client = self.client()?;
        let model = model.unwrap_or_else(|| self.config.api.model.clone());
        let texts: Vec<String> = excerpts.iter().map(|e| e.text.clone()).collect();
        let results = client.revise_batch(&texts, template, &model);
        let mut failed = 0;
        for (e, r) in excerpts.iter_mut().zip(results) {
            match r {
                Ok(revision) => e.revised_text = Some(revision),
                Err(err) => {
                    writeln!(self.err, "{}: {err}", e.id)?;
                    failed += 1;
                }
            }
        }
        if failed > 0 {
            bail!("{failed} of {} revisions failed; nothing written", excerpts.len());
        }
        let mut buf = Vec::new();
        write_excerpts(&excerpts, &mut buf)?;
        write_output(Some(out), &buf, self.out)?;
        writeln!(self.err, "revised {} excerpts with {model}", excerpts.len())?;
        Ok(EXIT_OK)
    }

    fn evaluate(&mut self, args: EvaluateArgs) -> anyhow::Result<i32> {
        let lexicon = self.lexicon()?;
        let corpus: Vec<(String, String)> =
            load_excerpts(&args.corpus)?.into_iter().map(|e| (e.id, e.text)).collect();
        let mut inputs = vec![(args.corpus_label.clone(), SampleSet::Corpus, corpus)];
        for (path, label, set) in [
            (&args.baseline, &args.baseline_label, SampleSet::BaselineModel),
            (&args.candidate, &args.candidate_label, SampleSet::CandidateModel),
        ] {
            if let Some(path) = path {
                let mut missing = Vec::new();
                let revised: Vec<(String, String)> = load_excerpts(path)?
                    .into_iter()
                    .filter_map(|e| match e.revised_text {
                        Some(r) => Some((e.id, r)),
                        None => {
                            missing.push(e.id);
                            None
                        }
                    })
                    .collect();
                if !missing.is_empty() {
                    writeln!(self.err, "{}: {} rows have no revised_text", path.display(), missing.len())?;
                }
                inputs.push((label.clone(), set, revised));
            }
        }

        let mut summary = EvaluationSummary { sets: Vec::new(), comparisons: Vec::new(), skipped: Vec::new() };
        for (label, set, samples) in inputs {
            let scored = score_set(&samples, set, &lexicon);
            summary.skipped.extend(scored.skipped);
            let stats = aggregate(&scored.samples).with_context(|| format!("set {label:?}"))?;
            summary.sets.push(LabeledAggregate { label, source_set: set, stats });
        }
        let base = &summary.sets[0];
        for other in &summary.sets[1..] {
            summary.comparisons.push(LabeledComparison {
                baseline: base.label.clone(),
                candidate: other.label.clone(),
                report: compare(&base.stats, &other.stats)?,
            });
        }
        if summary.sets.len() == 3 {
            let (b, c) = (&summary.sets[1], &summary.sets[2]);
            summary.comparisons.push(LabeledComparison {
                baseline: b.label.clone(),
                candidate: c.label.clone(),
                report: compare(&b.stats, &c.stats)?,
            });
        }
        let mut json = serde_json::to_vec_pretty(&summary)?;
        json.push(b'\n');
        write_output(args.out.as_deref(), &json, self.out)?;
        Ok(EXIT_OK)
    }

    fn report(&mut self, evaluation: Option<&Path>, rubric: Option<&Path>, out: Option<&Path>) -> anyhow::Result<i32> {
        if evaluation.is_none() && rubric.is_none() {
            bail!("nothing to report: pass --evaluation and/or --rubric");
        }
        let mut input = ReportInput::default();
        if let Some(path) = evaluation {
            let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let summary: EvaluationSummary =
                serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
            input.sets = summary.sets;
            input.comparisons = summary.comparisons;
        }
        if let Some(path) = rubric {
            input.rubric = Some(aggregate_rubric(&ingest_rubric(path)?)?);
        }
        let rendered = render_report(&input, self.format.unwrap_or(ReportFormat::Markdown))?;
        write_output(out, rendered.as_bytes(), self.out)?;
        Ok(EXIT_OK)
    }
}
