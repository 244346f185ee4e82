use std::collections::HashSet;

use crate::ner::{contains_type, Gazetteer};
use crate::question::QuestionAnalysis;
use crate::text::{light_stem, light_stem_str, tokenize};

use super::Passage;

/// Paragraphs longer than this (in characters) are split into sentences.
pub const MAX_PASSAGE_CHARS: usize = 500;

const SENTENCE_TERMINATORS: &[char] = &['؟', '?', '!', '.', '؛'];

fn split_sentences(paragraph: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = paragraph.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let at_boundary = chars.peek().is_none_or(|&(_, n)| n.is_whitespace());
        if SENTENCE_TERMINATORS.contains(&c) && at_boundary {
            let end = i + c.len_utf8();
            out.push(paragraph[start..end].trim().to_string());
            start = end;
        }
    }
    out.push(paragraph[start..].trim().to_string());
    out.retain(|s| !s.is_empty());
    out
}

/// Splits page text on blank lines; long paragraphs are further split at
/// sentence terminators. Lines within a paragraph are joined with spaces.
pub fn segment_passages(text: &str) -> Vec<Passage> {
    let mut paragraphs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() {
            if !current.is_empty() {
                paragraphs.push(current.join(" "));
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current.join(" "));
    }

    paragraphs
        .into_iter()
        .flat_map(|p| if p.chars().count() > MAX_PASSAGE_CHARS { split_sentences(&p) } else { vec![p] })
        .enumerate()
        .map(|(i, text)| Passage::unscored(text, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOptions {
    /// Minimum distinct keyword matches; `None` means ceil(|terms| / 2).
    pub min_keyword_hits: Option<usize>,
    pub focus_bonus: u32,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { min_keyword_hits: None, focus_bonus: 2 }
    }
}

fn contains_run(haystack: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Scores passages against the question and keeps those with enough keyword
/// matches and an entity of the expected answer type.
///
/// `score = keyword_hits + focus_bonus * focus_hit`; output is sorted by score
/// descending, then by source rank and position.
pub fn filter_and_rank(
    passages: Vec<Passage>,
    analysis: &QuestionAnalysis,
    gaz: &Gazetteer,
    options: RankOptions,
) -> Vec<Passage> {
    let term_stems: Vec<String> = analysis.keywords.iter().map(|t| light_stem_str(t)).collect();
    let threshold = options.min_keyword_hits.unwrap_or_else(|| term_stems.len().div_ceil(2));

    let mut kept: Vec<Passage> = passages
        .into_iter()
        .filter_map(|mut p| {
            let tokens: Vec<_> = tokenize(&p.text).into_iter().filter(|t| !t.normalized.is_empty()).collect();
            let stems: HashSet<String> = tokens.iter().map(light_stem).collect();
            let words: Vec<String> = tokens.into_iter().map(|t| t.normalized).collect();

            p.keyword_hits = term_stems.iter().filter(|s| stems.contains(*s)).count();
            p.focus_hit = contains_run(&words, &analysis.focus);
            p.ne_validated = contains_type(&p.text, analysis.expected_answer_type, gaz);
            p.score = p.keyword_hits as u32 + if p.focus_hit { options.focus_bonus } else { 0 };
            (p.keyword_hits >= threshold && p.ne_validated).then_some(p)
        })
        .collect();
    kept.sort_by_key(Passage::rank_key);
    kept
}
