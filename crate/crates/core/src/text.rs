//! Arabic-aware normalization, tokenization, stopword filtering and light stemming.
//!
//! Every other module works on the output of [`normalize`] and [`tokenize`], so the
//! rules here define what "the same word" means across the pipeline:
//!
//! - diacritics (U+064B..U+0652) and tatweel (U+0640) are dropped
//! - alef variants أ إ آ become ا, and ى becomes ي
//! - Arabic-Indic digits become ASCII digits
//! - whitespace runs collapse to one space, with no leading or trailing space
//!
//! Ta marbuta (ة) is kept as is so that dictionary spellings such as عاصمة stay intact.

use std::collections::HashSet;
use std::ops::Range;

/// Characters emitted as standalone tokens.
pub const PUNCTUATION: &[char] = &['؟', '?', '.', '؛', '،', '!', ':', '(', ')', '«', '»', ',', ';'];

/// Question marks accepted at the end of a question.
pub const QUESTION_MARKS: &[char] = &['؟', '?'];

fn is_diacritic(ch: char) -> bool {
    ('\u{064B}'..='\u{0652}').contains(&ch)
}

fn map_char(ch: char) -> Option<char> {
    match ch {
        '\u{0640}' => None,
        c if is_diacritic(c) => None,
        '\u{0623}' | '\u{0625}' | '\u{0622}' => Some('\u{0627}'),
        '\u{0649}' => Some('\u{064A}'),
        '\u{0660}'..='\u{0669}' => {
            let digit = ch as u32 - 0x0660;
            char::from_digit(digit, 10)
        }
        c => Some(c),
    }
}

/// Normalizes Arabic text. Total, idempotent and never lengthens its input.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for ch in text.chars().filter_map(map_char) {
        if ch.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(ch);
    }
    out
}

/// A token of some source text. `span` is a byte range into that source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    pub span: Range<usize>,
}

impl Token {
    fn new(source: &str, span: Range<usize>) -> Self {
        let surface = source[span.clone()].to_string();
        let normalized = normalize(&surface);
        Token { surface, normalized, span }
    }

    /// Builds a token that does not point into any larger source.
    pub fn standalone(surface: &str) -> Self {
        Token::new(surface, 0..surface.len())
    }

    pub fn is_punctuation(&self) -> bool {
        let mut chars = self.surface.chars();
        matches!((chars.next(), chars.next()), (Some(c), None) if PUNCTUATION.contains(&c))
    }

    pub fn is_question_mark(&self) -> bool {
        let mut chars = self.surface.chars();
        matches!((chars.next(), chars.next()), (Some(c), None) if QUESTION_MARKS.contains(&c))
    }
}

fn is_digit(ch: char) -> bool {
    ch.is_ascii_digit() || ('\u{0660}'..='\u{0669}').contains(&ch)
}

/// Splits text on whitespace and punctuation. Punctuation marks become
/// single-character tokens, except `.` `,` `،` sitting between two digits,
/// which stay inside the number.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let mut chars = text.char_indices().peekable();
    let mut prev: Option<char> = None;

    while let Some((idx, ch)) = chars.next() {
        let next = chars.peek().map(|&(_, c)| c);
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token::new(text, s..idx));
            }
        } else if PUNCTUATION.contains(&ch) {
            let decimal = matches!(ch, '.' | ',' | '،')
                && start.is_some()
                && prev.is_some_and(is_digit)
                && next.is_some_and(is_digit);
            if !decimal {
                if let Some(s) = start.take() {
                    tokens.push(Token::new(text, s..idx));
                }
                tokens.push(Token::new(text, idx..idx + ch.len_utf8()));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
        prev = Some(ch);
    }
    if let Some(s) = start {
        tokens.push(Token::new(text, s..text.len()));
    }
    tokens
}

/// Set of normalized function words.
#[derive(Debug, Clone, Default)]
pub struct Stopwords {
    words: HashSet<String>,
}

impl Stopwords {
    /// Parses the one-entry-per-line format; `#` starts a comment line.
    pub fn parse(contents: &str) -> Self {
        Stopwords { words: data_lines(contents).map(normalize).collect() }
    }

    pub fn builtin() -> Self {
        Self::parse(include_str!("../data/stopwords.txt"))
    }

    pub fn contains(&self, normalized: &str) -> bool {
        !normalized.is_empty() && self.words.contains(normalized)
    }

    pub fn is_stopword(&self, token: &Token) -> bool {
        self.contains(&token.normalized)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Non-empty, non-comment lines of a data file, trimmed.
pub(crate) fn data_lines(contents: &str) -> impl Iterator<Item = &str> {
    contents.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

const ARTICLE_PREFIXES: &[&str] = &["وال", "بال", "كال", "فال", "ال", "لل"];
const SUFFIXES: &[&str] = &["ات", "ون", "ين", "ها", "هم", "ة"];
const MIN_STEM_CHARS: usize = 2;

fn strip_affix<'a>(word: &'a str, affixes: &[&str], prefix: bool) -> Option<&'a str> {
    affixes.iter().find_map(|affix| {
        let rest = if prefix { word.strip_prefix(affix) } else { word.strip_suffix(affix) }?;
        (rest.chars().count() >= MIN_STEM_CHARS).then_some(rest)
    })
}

/// Light stem of an already normalized word.
///
/// A definite-article prefix is stripped when present; otherwise one plural or
/// feminine suffix is. Both are only removed when at least two characters remain.
pub fn light_stem_str(normalized: &str) -> String {
    if let Some(rest) = strip_affix(normalized, ARTICLE_PREFIXES, true) {
        return rest.to_string();
    }
    strip_affix(normalized, SUFFIXES, false).unwrap_or(normalized).to_string()
}

pub fn light_stem(token: &Token) -> String {
    light_stem_str(&token.normalized)
}
