//! Rule-based pipeline for Arabic factoid questions.
//!
//! Questions are analyzed into keywords, focus, expected answer type and a
//! declarative form ([`question`]), translated into first-order logic forms
//! ([`logic`]), answered with passages retrieved from web pages ([`retrieval`],
//! validated with [`ner`]), stored as question-text pairs ([`corpus`]) and scored
//! with accuracy and c@1 ([`eval`]).

pub mod corpus;
pub mod eval;
pub mod logic;
pub mod ner;
pub mod question;
pub mod resources;
pub mod retrieval;
pub mod text;

use std::path::PathBuf;

use thiserror::Error;

pub use logic::{parse_logic_form, render_logic_form, LogicError, LogicForm};
pub use question::{AnalysisError, Domain, ExpectedAnswerType, Question, QuestionAnalysis, Source};
pub use resources::Resources;
pub use text::{normalize, tokenize, Token};

/// Failure to load one of the shipped data files.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("data directory {0} does not exist")]
    MissingDir(PathBuf),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {reason}")]
    Malformed { file: String, line: usize, reason: String },
}
