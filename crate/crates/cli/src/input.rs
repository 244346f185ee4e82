use std::fs;
use std::io::Cursor;
use std::path::Path;

use aqa_core::corpus::read_questions;
use aqa_core::{Domain, Question, Source};

use crate::error::CliError;

pub fn is_file(input: &str) -> bool {
    !input.is_empty() && Path::new(input).is_file()
}

/// Questions from a file, or the argument itself as a single question `q1`.
///
/// Files whose first non-blank line starts with `{` are read as question
/// records; anything else is one question per line, numbered `q1`, `q2`, ...
pub fn load(input: &str, source: Source, domain: Domain) -> Result<Vec<Question>, CliError> {
    if !is_file(input) {
        return Ok(vec![Question::new("q1", input, source, domain)]);
    }
    let path = Path::new(input);
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text, source, domain).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn parse(text: &str, source: Source, domain: Domain) -> Result<Vec<Question>, String> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    if first.is_some_and(|l| l.starts_with('{')) {
        return read_questions(Cursor::new(text)).map_err(|e| e.to_string());
    }
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| Question::new(format!("q{}", i + 1), l, source, domain))
        .collect())
}
