use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use aqa_core::corpus::{
    corpus_stats, load_corpus, load_questions, validate_against, validate_entry, write_corpus, CorpusEntry,
};
use aqa_core::eval::{evaluate_run, read_gold_logic_forms, AnswerEvalCounts, EvalReport, LogicEvalCounts};
use aqa_core::retrieval::{
    FixtureProvider, HttpFetcher, HttpOptions, LiveProvider, PageFetcher, Retriever, SearchProvider,
};
use aqa_core::{LogicError, Question, Resources};
use serde_json::json;
use tracing::warn;

use crate::config::{Config, Endpoint};
use crate::error::CliError;

fn output(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_err(e: io::Error) -> CliError {
    CliError::Io(format!("writing output: {e}"))
}

fn resources(cfg: &Config) -> Result<Resources, CliError> {
    Ok(match &cfg.data_dir {
        Some(dir) => Resources::load_dir(dir)?,
        None => Resources::builtin(),
    })
}

/// Search provider and page fetcher chosen by the configured endpoint.
struct Backend {
    provider: Box<dyn SearchProvider>,
    fetcher: Box<dyn PageFetcher>,
}

impl Backend {
    fn new(cfg: &Config) -> Result<Self, CliError> {
        match &cfg.search_endpoint {
            Some(Endpoint::Fixture(dir)) => {
                if !dir.is_dir() {
                    return Err(CliError::Config(format!("fixture directory {} does not exist", dir.display())));
                }
                Ok(Backend {
                    provider: Box::new(FixtureProvider::new(dir)),
                    fetcher: Box::new(FixtureProvider::new(dir)),
                })
            }
            Some(Endpoint::Live(url)) => Ok(Backend {
                provider: Box::new(LiveProvider::new(url, &cfg.search_api_key_env, cfg.timeout())),
                fetcher: Box::new(HttpFetcher::new(HttpOptions {
                    timeout: cfg.timeout(),
                    allow_hosts: cfg.allow_hosts.clone(),
                    deny_hosts: cfg.deny_hosts.clone(),
                })),
            }),
            None => {
                Err(CliError::Provider("no search endpoint configured; pass --fixtures or set search_endpoint".into()))
            }
        }
    }

    fn retriever<'a>(&'a self, res: &'a Resources, cfg: &Config) -> Retriever<'a> {
        let mut r = Retriever::new(res, self.provider.as_ref(), self.fetcher.as_ref());
        r.max_results = cfg.max_results;
        r.max_fetch_concurrency = cfg.max_fetch_concurrency;
        r
    }
}

/// Reports per-question failures and turns any into one linguistic error.
fn finish(failures: Vec<String>, what: &str) -> Result<(), CliError> {
    for f in &failures {
        eprintln!("{f}");
    }
    match failures.len() {
        0 => Ok(()),
        n => Err(CliError::Linguistic(format!("{n} question(s) could not be {what}"))),
    }
}

pub fn analyze(cfg: &Config, questions: &[Question], out: Option<&Path>) -> Result<(), CliError> {
    let res = resources(cfg)?;
    let analyzer = res.question_analyzer();
    let mut w = output(out)?;
    let mut failures = Vec::new();
    for q in questions {
        match analyzer.analyze(q) {
            Ok(a) => {
                let rec = json!({
                    "id": q.id,
                    "question_text": q.text,
                    "interrogative_particle": a.interrogative_particle,
                    "question_type": a.question_type,
                    "expected_answer_type": a.expected_answer_type,
                    "keywords": a.keywords,
                    "focus": a.focus_phrase(),
                    "declarative_form": a.declarative_form,
                });
                writeln!(w, "{rec}").map_err(write_err)?;
            }
            Err(e) => failures.push(format!("{}: {e}", q.id)),
        }
    }
    w.flush().map_err(write_err)?;
    finish(failures, "analyzed")
}

pub fn logic(cfg: &Config, questions: &[Question], with_ids: bool, out: Option<&Path>) -> Result<(), CliError> {
    let res = resources(cfg)?;
    let analyzer = res.question_analyzer();
    let mut w = output(out)?;
    let mut failures = Vec::new();
    for q in questions {
        let form = analyzer
            .analyze(q)
            .map_err(|e| e.to_string())
            .and_then(|a| res.logic_form(&a).map_err(|e: LogicError| e.to_string()));
        match form {
            Ok(lf) if with_ids => writeln!(w, "{}\t{lf}", q.id).map_err(write_err)?,
            Ok(lf) => writeln!(w, "{lf}").map_err(write_err)?,
            Err(e) => failures.push(format!("{}: {e}", q.id)),
        }
    }
    w.flush().map_err(write_err)?;
    finish(failures, "translated")
}

pub fn retrieve(cfg: &Config, questions: &[Question], out: Option<&Path>) -> Result<(), CliError> {
    let res = resources(cfg)?;
    let backend = Backend::new(cfg)?;
    let retriever = backend.retriever(&res, cfg);
    let mut w = output(out)?;
    for q in questions {
        let run = retriever.run(q)?;
        for p in &run.passages {
            let mut rec = serde_json::to_value(p).map_err(|e| CliError::Io(e.to_string()))?;
            rec["question_id"] = q.id.clone().into();
            writeln!(w, "{rec}").map_err(write_err)?;
        }
        if run.passages.is_empty() {
            eprintln!("{}: no passage passed the keyword and entity filters", q.id);
        }
    }
    w.flush().map_err(write_err)
}

pub fn corpus_build(cfg: &Config, questions_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let questions = load_questions(questions_path)?;
    if questions.is_empty() {
        return Err(CliError::Io(format!("{} contains no questions", questions_path.display())));
    }
    let res = resources(cfg)?;
    let backend = Backend::new(cfg)?;
    let retriever = backend.retriever(&res, cfg);
    let analyzer = res.question_analyzer();

    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for q in questions {
        let analysis = match analyzer.analyze(&q) {
            Ok(a) => a,
            Err(e) => {
                failures.push(format!("{}: {e}", q.id));
                continue;
            }
        };
        let mut entry = CorpusEntry::new(q, analysis);
        match res.logic_form(&entry.analysis) {
            Ok(lf) => entry.logic_form = Some(lf),
            Err(e) => warn!("{}: no logic form: {e}", entry.question.id),
        }
        let run = retriever.run(&entry.question)?;
        if entry.question.gold_answer.is_some() {
            let candidates = run.candidate_texts();
            validate_against(&mut entry, candidates.iter().map(|p| p.text.as_str()))?;
        }
        entry.passages = run.passages;
        entries.push(entry);
    }

    let mut w = output(out)?;
    write_corpus(&entries, &mut w).map_err(write_err)?;
    summarize(&entries);
    finish(failures, "analyzed")
}

fn summarize(entries: &[CorpusEntry]) {
    let answered = entries.iter().filter(|e| e.answer_found).count();
    let without = entries.iter().filter(|e| !e.answer_found && e.passages.is_empty()).count();
    eprintln!(
        "{} entries: {answered} answered, {} unanswered with passages, {without} without passages",
        entries.len(),
        entries.len() - answered - without
    );
    let stats = corpus_stats(entries);
    let line = |m: String| eprintln!("  {m}");
    line(stats.by_source.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "));
    line(stats.by_domain.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "));
}

fn prompt(input: &mut impl BufRead, text: &str) -> Option<String> {
    eprint!("{text}");
    let _ = io::stderr().flush();
    let mut line = String::new();
    match input.read_line(&mut line) {
        Ok(0) | Err(_) => None,
        Ok(_) => Some(line.trim().to_string()),
    }
}

/// Walks the passages of an entry without a gold answer; an accepted passage
/// plus a typed answer span becomes the gold answer and validated text.
/// Returns `None` once input is exhausted.
fn ask(entry: &mut CorpusEntry, input: &mut impl BufRead) -> Option<()> {
    let texts: Vec<String> = entry.passages.iter().map(|p| p.text.clone()).collect();
    let n = texts.len();
    eprintln!("\n[{}] {}", entry.question.id, entry.question.text);
    for (i, text) in texts.into_iter().enumerate() {
        eprintln!("  passage {}/{n}: {text}", i + 1);
        match prompt(input, "  accept? [y/N/s=skip question] ")?.as_str() {
            "y" | "Y" => {}
            "s" | "S" => return Some(()),
            _ => continue,
        }
        let answer = prompt(input, "  answer as it appears in the passage: ")?;
        if answer.is_empty() {
            continue;
        }
        entry.question.gold_answer = Some(answer);
        if validate_entry(entry, &text).unwrap_or(false) {
            return Some(());
        }
        eprintln!("  that answer does not occur in the passage");
        entry.question.gold_answer = None;
    }
    Some(())
}

pub fn corpus_validate(corpus: &Path, interactive: bool, out: Option<&Path>) -> Result<(), CliError> {
    let mut entries = load_corpus(corpus)?;
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut asking = interactive;
    let mut newly = 0;
    for entry in entries.iter_mut().filter(|e| !e.answer_found) {
        if entry.question.gold_answer.is_some() {
            let texts: Vec<String> = entry.passages.iter().map(|p| p.text.clone()).collect();
            validate_against(entry, texts.iter().map(String::as_str))?;
        } else if asking && !entry.passages.is_empty() {
            asking = ask(entry, &mut input).is_some();
        }
        newly += usize::from(entry.answer_found);
    }
    let mut w = output(out)?;
    write_corpus(&entries, &mut w).map_err(write_err)?;
    eprintln!("{newly} entries newly validated");
    summarize(&entries);
    Ok(())
}

fn print_report(report: &EvalReport, out: Option<&Path>) -> Result<(), CliError> {
    let mut w = output(out)?;
    writeln!(w, "{}", report.to_record()).map_err(write_err)?;
    w.flush().map_err(write_err)
}

pub fn eval_corpus(corpus: &Path, gold: Option<&Path>, out: Option<&Path>) -> Result<(), CliError> {
    let entries = load_corpus(corpus)?;
    if entries.is_empty() {
        return Err(CliError::Io(format!("{} contains no entries", corpus.display())));
    }
    let gold = gold
        .map(|p| {
            let f = File::open(p).map_err(|e| CliError::io(p, e))?;
            read_gold_logic_forms(io::BufReader::new(f)).map_err(CliError::from)
        })
        .transpose()?;
    print_report(&evaluate_run(&entries, gold.as_ref())?, out)
}

pub fn eval_counts(tq: u64, ct: Option<u64>, ca: Option<u64>, uq: u64, out: Option<&Path>) -> Result<(), CliError> {
    let logic = ct.map(|ct| LogicEvalCounts::new(ct, tq)).transpose()?;
    let answers = ca.map(|ca| AnswerEvalCounts::new(ca, uq, tq)).transpose()?;
    if logic.is_none() && answers.is_none() {
        return Err(CliError::Config("--tq needs --ct and/or --ca".into()));
    }
    print_report(&EvalReport::from_counts(logic, answers), out)
}
