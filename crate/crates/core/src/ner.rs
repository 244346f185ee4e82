//! Gazetteer and pattern based named-entity recognition.
//!
//! PERSON, LOCATION and ORGANIZATION come from longest-match lookups of
//! normalized token n-grams (n <= 4) in the gazetteer. DATE and
//! NUMERIC_EXPRESSION come from patterns: years, day/month/year forms, month
//! names, and numbers with an optional unit word.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::ops::Range;
use std::path::Path;

use crate::question::ExpectedAnswerType;
use crate::text::{data_lines, normalize, tokenize, Token};
use crate::DataError;

const MAX_NGRAM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityMention {
    /// Source slice covered by the mention.
    pub text: String,
    pub entity_type: ExpectedAnswerType,
    /// Byte range into the source text.
    pub span: Range<usize>,
}

fn parse_set(contents: &str) -> HashSet<String> {
    data_lines(contents).map(normalize).collect()
}

/// Entity names per type plus the vocabularies used by the date and number patterns.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    names: BTreeMap<ExpectedAnswerType, HashSet<String>>,
    months: HashSet<String>,
    units: HashSet<String>,
}

impl Gazetteer {
    pub fn builtin() -> Self {
        let mut g = Gazetteer::default();
        g.extend_from_str(ExpectedAnswerType::Person, include_str!("../data/gazetteer_person.txt"));
        g.extend_from_str(ExpectedAnswerType::Location, include_str!("../data/gazetteer_location.txt"));
        g.extend_from_str(ExpectedAnswerType::Organization, include_str!("../data/gazetteer_organization.txt"));
        g.months = parse_set(include_str!("../data/months.txt"));
        g.units = parse_set(include_str!("../data/units.txt"));
        g
    }

    /// Loads the five gazetteer files from `dir`; a missing file keeps the built-in list.
    pub fn load_dir(dir: &Path) -> Result<Self, DataError> {
        let mut g = Gazetteer::builtin();
        let read = |name: &str| -> Result<Option<String>, DataError> {
            let path = dir.join(name);
            match fs::read_to_string(&path) {
                Ok(s) => Ok(Some(s)),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
                Err(source) => Err(DataError::Io { path, source }),
            }
        };
        for (ty, file) in [
            (ExpectedAnswerType::Person, "gazetteer_person.txt"),
            (ExpectedAnswerType::Location, "gazetteer_location.txt"),
            (ExpectedAnswerType::Organization, "gazetteer_organization.txt"),
        ] {
            if let Some(contents) = read(file)? {
                g.names.insert(ty, parse_set(&contents));
            }
        }
        if let Some(contents) = read("months.txt")? {
            g.months = parse_set(&contents);
        }
        if let Some(contents) = read("units.txt")? {
            g.units = parse_set(&contents);
        }
        Ok(g)
    }

    pub fn extend_from_str(&mut self, ty: ExpectedAnswerType, contents: &str) {
        self.names.entry(ty).or_default().extend(parse_set(contents));
    }

    pub fn insert(&mut self, ty: ExpectedAnswerType, name: &str) {
        self.names.entry(ty).or_default().insert(normalize(name));
    }

    pub fn contains(&self, ty: ExpectedAnswerType, normalized: &str) -> bool {
        self.names.get(&ty).is_some_and(|s| s.contains(normalized))
    }

    pub fn is_month(&self, normalized: &str) -> bool {
        self.months.contains(normalized)
    }

    pub fn is_unit(&self, normalized: &str) -> bool {
        self.units.contains(normalized)
    }
}

fn all_digits(s: &str, len: Range<usize>) -> bool {
    len.contains(&s.len()) && s.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn is_year(s: &str) -> bool {
    all_digits(s, 3..5)
}

fn is_day(s: &str) -> bool {
    all_digits(s, 1..3) && matches!(s.parse::<u8>(), Ok(1..=31))
}

/// `d/m/yyyy`, `d-m-yy`, `d.m.yyyy`.
pub(crate) fn is_numeric_date(s: &str) -> bool {
    let parts: Vec<&str> = s.split(['/', '-', '.']).collect();
    parts.len() == 3
        && is_day(parts[0])
        && all_digits(parts[1], 1..3)
        && matches!(parts[1].parse::<u8>(), Ok(1..=12))
        && all_digits(parts[2], 2..5)
}

/// Digits with optional decimal or thousands separators.
pub(crate) fn is_number(s: &str) -> bool {
    !s.is_empty() && s.split(['.', ',', '،']).all(|p| all_digits(p, 1..usize::MAX))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    start: usize,
    end: usize,
    ty: ExpectedAnswerType,
}

impl Candidate {
    fn len(&self) -> usize {
        self.end - self.start
    }

    fn overlaps(&self, other: &Candidate) -> bool {
        self.start < other.end && other.start < self.end
    }
}

fn word_runs(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, tok) in tokens.iter().enumerate() {
        let word = !tok.is_punctuation() && !tok.normalized.is_empty();
        match (word, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push(s..tokens.len());
    }
    runs
}

fn candidates(tokens: &[Token], gaz: &Gazetteer) -> Vec<Candidate> {
    let mut out = Vec::new();
    let key = |r: Range<usize>| tokens[r].iter().map(|t| t.normalized.as_str()).collect::<Vec<_>>().join(" ");

    for run in word_runs(tokens) {
        for i in run.clone() {
            for end in (i + 1)..=(i + MAX_NGRAM).min(run.end) {
                let k = key(i..end);
                for ty in [ExpectedAnswerType::Person, ExpectedAnswerType::Location, ExpectedAnswerType::Organization] {
                    if gaz.contains(ty, &k) {
                        out.push(Candidate { start: i, end, ty });
                    }
                }
                if gaz.is_month(&k) {
                    let day_before = i > run.start && is_day(&tokens[i - 1].normalized);
                    let year_after = end < run.end && is_year(&tokens[end].normalized);
                    let starts = if day_before { vec![i, i - 1] } else { vec![i] };
                    let ends = if year_after { vec![end, end + 1] } else { vec![end] };
                    for &s in &starts {
                        for &e in &ends {
                            out.push(Candidate { start: s, end: e, ty: ExpectedAnswerType::Date });
                        }
                    }
                }
            }

            let word = tokens[i].normalized.as_str();
            if is_year(word) || is_numeric_date(word) {
                out.push(Candidate { start: i, end: i + 1, ty: ExpectedAnswerType::Date });
            }
            if is_number(word) {
                let ty = ExpectedAnswerType::NumericExpression;
                out.push(Candidate { start: i, end: i + 1, ty });
                if i + 1 < run.end && gaz.is_unit(&tokens[i + 1].normalized) {
                    out.push(Candidate { start: i, end: i + 2, ty });
                }
            }
        }
    }
    out
}

/// Keeps, per entity type, the longest non-overlapping candidates.
fn resolve(mut cands: Vec<Candidate>) -> Vec<Candidate> {
    cands.sort_by_key(|c| (c.ty, std::cmp::Reverse(c.len()), c.start));
    cands.dedup();
    let mut kept: Vec<Candidate> = Vec::new();
    for c in cands {
        if !kept.iter().any(|k| k.ty == c.ty && k.overlaps(&c)) {
            kept.push(c);
        }
    }
    kept.sort_by_key(|c| (c.start, std::cmp::Reverse(c.len()), c.ty));
    kept
}

pub fn recognize(text: &str, gaz: &Gazetteer) -> Vec<EntityMention> {
    let tokens = tokenize(text);
    resolve(candidates(&tokens, gaz))
        .into_iter()
        .map(|c| {
            let span = tokens[c.start].span.start..tokens[c.end - 1].span.end;
            EntityMention { text: text[span.clone()].to_string(), entity_type: c.ty, span }
        })
        .collect()
}

pub fn contains_type(text: &str, ty: ExpectedAnswerType, gaz: &Gazetteer) -> bool {
    recognize(text, gaz).iter().any(|m| m.entity_type == ty)
}
