//! Question-text pair storage.
//!
//! A corpus file holds one JSON object per line:
//!
//! ```text
//! {"id":"q1","question_text":"من صمم برج ايفل؟","source":"FAQ","domain":"DISCOVERIES_CULTURE",
//!  "gold_answer":"جوستاف ايفل","keywords":["صمم","برج","ايفل"],"focus":"برج ايفل",
//!  "expected_answer_type":"PERSON","declarative_form":"صمم برج ايفل",
//!  "logic_form_rendered":"∃X, ∃Y, PERSON(X) ∧ ...","answer_found":true,
//!  "validated_text":"...","passages":[{"text":"...","source_url":"...","score":4}]}
//! ```
//!
//! `gold_answer`, `logic_form_rendered` and `validated_text` are optional.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{parse_logic_form, LogicForm};
use crate::question::{detect_in_tokens, Domain, ExpectedAnswerType, Question, QuestionAnalysis, Source};
use crate::retrieval::Passage;
use crate::text::{normalize, tokenize};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {reason}")]
    Schema { line: usize, reason: String },
    #[error("entry {0} has no gold answer")]
    MissingGoldAnswer(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub question: Question,
    pub analysis: QuestionAnalysis,
    pub logic_form: Option<LogicForm>,
    pub passages: Vec<Passage>,
    pub validated_text: Option<String>,
    pub answer_found: bool,
}

impl CorpusEntry {
    pub fn new(question: Question, analysis: QuestionAnalysis) -> Self {
        CorpusEntry {
            question,
            analysis,
            logic_form: None,
            passages: Vec::new(),
            validated_text: None,
            answer_found: false,
        }
    }
}

/// Checks one candidate text for the gold answer.
///
/// Matching is normalized substring containment. On a match the entry is marked
/// as answered with `candidate` as its validated text; otherwise it is unchanged
/// and the caller should try the next page.
pub fn validate_entry(entry: &mut CorpusEntry, candidate: &str) -> Result<bool, CorpusError> {
    let gold = entry
        .question
        .gold_answer
        .as_deref()
        .map(normalize)
        .filter(|g| !g.is_empty())
        .ok_or_else(|| CorpusError::MissingGoldAnswer(entry.question.id.clone()))?;
    if normalize(candidate).contains(&gold) {
        entry.answer_found = true;
        entry.validated_text = Some(candidate.to_string());
        Ok(true)
    } else {
        Ok(false)
    }
}

/// Tries candidates in order and stops at the first that contains the answer.
pub fn validate_against<'t>(
    entry: &mut CorpusEntry,
    candidates: impl IntoIterator<Item = &'t str>,
) -> Result<bool, CorpusError> {
    for text in candidates {
        if validate_entry(entry, text)? {
            return Ok(true);
        }
    }
    // surface a missing gold answer even when there is nothing to check
    if entry.question.gold_answer.is_none() {
        return Err(CorpusError::MissingGoldAnswer(entry.question.id.clone()));
    }
    Ok(false)
}

#[derive(Debug, Serialize, Deserialize)]
struct PassageRecord {
    text: String,
    source_url: String,
    score: u32,
    #[serde(default)]
    source_rank: usize,
    #[serde(default)]
    position: usize,
    #[serde(default)]
    keyword_hits: usize,
    #[serde(default)]
    focus_hit: bool,
    #[serde(default)]
    ne_validated: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    question_text: String,
    source: Source,
    domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gold_answer: Option<String>,
    keywords: Vec<String>,
    focus: String,
    expected_answer_type: ExpectedAnswerType,
    declarative_form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    logic_form_rendered: Option<String>,
    answer_found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    validated_text: Option<String>,
    passages: Vec<PassageRecord>,
}

impl From<&CorpusEntry> for Record {
    fn from(e: &CorpusEntry) -> Self {
        Record {
            id: e.question.id.clone(),
            question_text: e.question.text.clone(),
            source: e.question.source,
            domain: e.question.domain,
            gold_answer: e.question.gold_answer.clone(),
            keywords: e.analysis.keywords.clone(),
            focus: e.analysis.focus_phrase(),
            expected_answer_type: e.analysis.expected_answer_type,
            declarative_form: e.analysis.declarative_form.clone(),
            logic_form_rendered: e.logic_form.as_ref().map(LogicForm::render),
            answer_found: e.answer_found,
            validated_text: e.validated_text.clone(),
            passages: e
                .passages
                .iter()
                .map(|p| PassageRecord {
                    text: p.text.clone(),
                    source_url: p.source_url.clone(),
                    score: p.score,
                    source_rank: p.source_rank,
                    position: p.position,
                    keyword_hits: p.keyword_hits,
                    focus_hit: p.focus_hit,
                    ne_validated: p.ne_validated,
                })
                .collect(),
        }
    }
}

impl Record {
    fn into_entry(self) -> Result<CorpusEntry, String> {
        let tokens = tokenize(&self.question_text);
        let (idx, question_type) = detect_in_tokens(&tokens).map_err(|e| format!("question_text: {e}"))?;
        if self.answer_found && (self.validated_text.is_none() || self.gold_answer.is_none()) {
            return Err("answer_found requires gold_answer and validated_text".into());
        }
        let logic_form = self
            .logic_form_rendered
            .as_deref()
            .map(parse_logic_form)
            .transpose()
            .map_err(|e| format!("logic_form_rendered: {e}"))?;
        let focus = self.focus.split_whitespace().map(str::to_string).collect();
        Ok(CorpusEntry {
            question: Question {
                id: self.id,
                text: self.question_text,
                source: self.source,
                domain: self.domain,
                gold_answer: self.gold_answer,
            },
            analysis: QuestionAnalysis {
                interrogative_particle: tokens[idx].surface.clone(),
                question_type,
                expected_answer_type: self.expected_answer_type,
                keywords: self.keywords,
                focus,
                declarative_form: self.declarative_form,
            },
            logic_form,
            passages: self
                .passages
                .into_iter()
                .map(|p| Passage {
                    text: p.text,
                    source_url: p.source_url,
                    source_rank: p.source_rank,
                    position: p.position,
                    keyword_hits: p.keyword_hits,
                    focus_hit: p.focus_hit,
                    ne_validated: p.ne_validated,
                    score: p.score,
                })
                .collect(),
            validated_text: self.validated_text,
            answer_found: self.answer_found,
        })
    }
}

pub fn write_corpus<W: Write>(entries: &[CorpusEntry], mut out: W) -> io::Result<()> {
    for entry in entries {
        serde_json::to_writer(&mut out, &Record::from(entry))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_corpus<R: BufRead>(input: R) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut entries = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| CorpusError::Schema { line: line_no, reason: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let entry = serde_json::from_str::<Record>(&line)
            .map_err(|e| e.to_string())
            .and_then(Record::into_entry)
            .map_err(|reason| CorpusError::Schema { line: line_no, reason })?;
        entries.push(entry);
    }
    Ok(entries)
}

pub fn save_corpus(entries: &[CorpusEntry], path: &Path) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io { path: path.to_path_buf(), source };
    let file = fs::File::create(path).map_err(io_err)?;
    write_corpus(entries, BufWriter::new(file)).map_err(io_err)
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let file = fs::File::open(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    read_corpus(BufReader::new(file))
}

/// Reads question records (the `id`, `question_text`, `source`, `domain` and
/// optional `gold_answer` fields of the corpus format, one JSON object per line).
pub fn read_questions<R: BufRead>(input: R) -> Result<Vec<Question>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::Schema { line: i + 1, reason: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let q = serde_json::from_str(&line).map_err(|e| CorpusError::Schema { line: i + 1, reason: e.to_string() })?;
        out.push(q);
    }
    Ok(out)
}

pub fn load_questions(path: &Path) -> Result<Vec<Question>, CorpusError> {
    let file = fs::File::open(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    read_questions(BufReader::new(file))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub by_source: BTreeMap<Source, usize>,
    pub by_domain: BTreeMap<Domain, usize>,
    pub total: usize,
}

pub fn corpus_stats(entries: &[CorpusEntry]) -> CorpusStats {
    let mut by_source: BTreeMap<Source, usize> = Source::ALL.iter().map(|&s| (s, 0)).collect();
    let mut by_domain: BTreeMap<Domain, usize> = Domain::ALL.iter().map(|&d| (d, 0)).collect();
    for e in entries {
        *by_source.entry(e.question.source).or_default() += 1;
        *by_domain.entry(e.question.domain).or_default() += 1;
    }
    CorpusStats { by_source, by_domain, total: entries.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;

    fn entry(id: &str, text: &str, source: Source, domain: Domain) -> CorpusEntry {
        let q = Question::new(id, text, source, domain);
        let res = Resources::builtin();
        let analysis = res.question_analyzer().analyze(&q).unwrap();
        let mut e = CorpusEntry::new(q, analysis);
        e.logic_form = res.logic_form(&e.analysis).ok();
        e
    }

    fn eiffel() -> CorpusEntry {
        let mut e = entry("q1", "من صمم برج ايفل؟", Source::Faq, Domain::DiscoveriesCulture);
        e.question.gold_answer = Some("جوستاف إيفل".into());
        e
    }

    #[test]
    fn validation_examples() {
        let mut e = eiffel();
        assert!(!validate_entry(&mut e, "برج ايفل في باريس").unwrap());
        assert!(!e.answer_found);
        assert!(validate_against(&mut e, ["نص اول", "صممه المعماري جوستاف ايفل."]).unwrap());
        assert!(e.answer_found);
        assert_eq!(e.validated_text.as_deref(), Some("صممه المعماري جوستاف ايفل."));

        let mut missing = entry("q2", "متى استقلت تونس؟", Source::Trec, Domain::HistoryIslam);
        assert!(matches!(validate_entry(&mut missing, "1956"), Err(CorpusError::MissingGoldAnswer(_))));
    }

    #[test]
    fn save_load_round_trip() {
        let mut a = eiffel();
        validate_entry(&mut a, "جوستاف ايفل").unwrap();
        a.passages.push(Passage {
            text: "صمم جوستاف إيفل البرج".into(),
            source_url: "https://example.org/a".into(),
            source_rank: 1,
            position: 3,
            keyword_hits: 2,
            focus_hit: false,
            ne_validated: true,
            score: 2,
        });
        let b = entry("q2", "متى استقلت تونس؟", Source::Trec, Domain::HistoryIslam);
        let c = entry("q3", "كم يبلغ طول نهر الأمازون؟", Source::Clef, Domain::WorldNews);
        let entries = vec![a, b, c];

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        save_corpus(&entries, &path).unwrap();
        assert_eq!(load_corpus(&path).unwrap(), entries);
    }

    #[test]
    fn schema_errors_name_the_line() {
        let mut buf = Vec::new();
        write_corpus(&[eiffel()], &mut buf).unwrap();
        let good = String::from_utf8(buf).unwrap();
        let truncated = format!("{good}{}\n", &good[..good.len() / 2]);
        match read_corpus(truncated.as_bytes()) {
            Err(CorpusError::Schema { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let other_domain = good.replace("DISCOVERIES_CULTURE", "OTHER");
        assert!(matches!(read_corpus(other_domain.as_bytes()), Err(CorpusError::Schema { line: 1, .. })));
        assert!(read_corpus("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn answer_found_needs_evidence() {
        let mut buf = Vec::new();
        write_corpus(&[eiffel()], &mut buf).unwrap();
        let forged = String::from_utf8(buf).unwrap().replace("\"answer_found\":false", "\"answer_found\":true");
        assert!(matches!(read_corpus(forged.as_bytes()), Err(CorpusError::Schema { .. })));
    }

    #[test]
    fn stats() {
        let empty = corpus_stats(&[]);
        assert_eq!(empty.total, 0);
        assert!(empty.by_source.values().chain(empty.by_domain.values()).all(|&n| n == 0));

        let entries = vec![
            entry("a", "متى استقلت تونس؟", Source::Forum, Domain::Sport),
            entry("b", "متى استقلت تونس؟", Source::Faq, Domain::Sport),
            entry("c", "متى استقلت تونس؟", Source::Faq, Domain::HealthMedicine),
        ];
        let s = corpus_stats(&entries);
        assert_eq!(s.total, 3);
        assert_eq!(s.by_domain[&Domain::Sport], 2);
        assert_eq!(s.by_domain[&Domain::HealthMedicine], 1);
        assert_eq!(s.by_source[&Source::Faq], 2);
    }

    #[test]
    fn questions_file_accepts_corpus_records() {
        let mut buf = Vec::new();
        write_corpus(&[eiffel()], &mut buf).unwrap();
        let qs = read_questions(buf.as_slice()).unwrap();
        assert_eq!(qs, [eiffel().question]);
    }
}
