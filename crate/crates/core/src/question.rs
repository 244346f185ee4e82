//! Question analysis: interrogative particle, expected answer type, keywords,
//! focus and declarative form.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::morph::{tag_tokens, MorphAnalyzer, MorphTag};
use crate::text::{tokenize, Stopwords, Token};

/// Named-entity class an answer must belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExpectedAnswerType {
    Person,
    Location,
    Date,
    Organization,
    NumericExpression,
}

impl ExpectedAnswerType {
    pub const ALL: [ExpectedAnswerType; 5] = [
        ExpectedAnswerType::Person,
        ExpectedAnswerType::Location,
        ExpectedAnswerType::Date,
        ExpectedAnswerType::Organization,
        ExpectedAnswerType::NumericExpression,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExpectedAnswerType::Person => "PERSON",
            ExpectedAnswerType::Location => "LOCATION",
            ExpectedAnswerType::Date => "DATE",
            ExpectedAnswerType::Organization => "ORGANIZATION",
            ExpectedAnswerType::NumericExpression => "NUMERIC_EXPRESSION",
        }
    }

    /// Functor of the answer-type predicate in a logic form.
    pub fn predicate_name(self) -> &'static str {
        match self {
            ExpectedAnswerType::NumericExpression => "NUMERICAL_EXPRESSION",
            other => other.as_str(),
        }
    }

    pub fn from_predicate_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.predicate_name() == name)
    }

    /// Whether the logic rule for this type is built around a verb.
    pub fn requires_verb(self) -> bool {
        !matches!(self, ExpectedAnswerType::Organization)
    }
}

impl fmt::Display for ExpectedAnswerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExpectedAnswerType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| format!("unknown answer type {s:?}"))
    }
}

/// Normalized interrogative particles and the answer type each one asks for.
pub const INTERROGATIVES: [(&str, ExpectedAnswerType); 6] = [
    ("من", ExpectedAnswerType::Person),
    ("اين", ExpectedAnswerType::Location),
    ("متي", ExpectedAnswerType::Date),
    ("ماهي", ExpectedAnswerType::Organization),
    ("ماهو", ExpectedAnswerType::Organization),
    ("كم", ExpectedAnswerType::NumericExpression),
];

/// Particle only accepted in sentence-initial position (otherwise it reads as "from").
const INITIAL_ONLY: &str = "من";

pub fn particle_type(normalized: &str) -> Option<ExpectedAnswerType> {
    INTERROGATIVES.iter().find(|(p, _)| *p == normalized).map(|&(_, t)| t)
}

/// Where a question was collected from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Source {
    Trec,
    Clef,
    Forum,
    Faq,
}

impl Source {
    pub const ALL: [Source; 4] = [Source::Trec, Source::Clef, Source::Forum, Source::Faq];
}

/// Topical domain of a question-text pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Domain {
    WorldNews,
    HistoryIslam,
    DiscoveriesCulture,
    Sport,
    HealthMedicine,
}

impl Domain {
    pub const ALL: [Domain; 5] =
        [Domain::WorldNews, Domain::HistoryIslam, Domain::DiscoveriesCulture, Domain::Sport, Domain::HealthMedicine];
}

macro_rules! serde_name_impls {
    ($($ty:ty),*) => {$(
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                match serde_json::to_value(self) {
                    Ok(serde_json::Value::String(s)) => f.write_str(&s),
                    _ => Err(fmt::Error),
                }
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                serde_json::from_value(serde_json::Value::String(s.to_string()))
                    .map_err(|_| format!("unknown {} {s:?}", stringify!($ty).to_lowercase()))
            }
        }
    )*};
}

serde_name_impls!(Source, Domain);

/// A factoid question as collected for the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    #[serde(rename = "question_text")]
    pub text: String,
    pub source: Source,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_answer: Option<String>,
}

impl Question {
    pub fn new(id: impl Into<String>, text: impl Into<String>, source: Source, domain: Domain) -> Self {
        Question { id: id.into(), text: text.into(), source, domain, gold_answer: None }
    }

    pub fn with_gold_answer(mut self, answer: impl Into<String>) -> Self {
        self.gold_answer = Some(answer.into());
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("question text is empty")]
    EmptyQuestion,
    #[error("question must end with a question mark (؟ or ?)")]
    MissingQuestionMark,
    #[error("question has {0} token(s); at least 2 are needed")]
    TooShort(usize),
    #[error("no supported interrogative particle found")]
    NoInterrogativeFound,
    #[error("no keywords left after removing the particle, punctuation and stopwords")]
    EmptyKeywords,
}

/// Features extracted from one question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionAnalysis {
    /// Surface form of the detected particle.
    pub interrogative_particle: String,
    pub question_type: ExpectedAnswerType,
    pub expected_answer_type: ExpectedAnswerType,
    pub keywords: Vec<String>,
    /// Normalized tokens of the focus phrase.
    pub focus: Vec<String>,
    pub declarative_form: String,
}

impl QuestionAnalysis {
    pub fn focus_phrase(&self) -> String {
        self.focus.join(" ")
    }
}

/// Finds the interrogative particle in a token sequence.
///
/// Returns the index of the particle token and its answer type. The scan is
/// left to right and the first match wins; من only counts at index 0.
pub fn detect_in_tokens(tokens: &[Token]) -> Result<(usize, ExpectedAnswerType), AnalysisError> {
    if tokens.len() < 2 {
        return Err(if tokens.is_empty() {
            AnalysisError::EmptyQuestion
        } else {
            AnalysisError::TooShort(tokens.len())
        });
    }
    tokens
        .iter()
        .enumerate()
        .find_map(|(i, tok)| {
            let t = particle_type(&tok.normalized)?;
            (i == 0 || tok.normalized != INITIAL_ONLY).then_some((i, t))
        })
        .ok_or(AnalysisError::NoInterrogativeFound)
}

pub fn detect_interrogative(question: &Question) -> Result<(Token, ExpectedAnswerType), AnalysisError> {
    let mut tokens = tokenize(&question.text);
    let (idx, ty) = detect_in_tokens(&tokens)?;
    Ok((tokens.swap_remove(idx), ty))
}

/// Question tokens with the particle and the trailing question mark removed.
fn declarative_tokens(mut tokens: Vec<Token>, particle_idx: usize) -> Vec<Token> {
    if tokens.last().is_some_and(Token::is_question_mark) {
        tokens.pop();
    }
    tokens.remove(particle_idx);
    tokens
}

fn join_surfaces(tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ")
}

/// Removes the particle and the trailing question mark.
pub fn to_declarative(question: &Question) -> Result<String, AnalysisError> {
    let tokens = tokenize(&question.text);
    let (idx, _) = detect_in_tokens(&tokens)?;
    Ok(join_surfaces(&declarative_tokens(tokens, idx)))
}

/// Stateless analyzer over borrowed linguistic resources.
#[derive(Clone, Copy)]
pub struct QuestionAnalyzer<'a> {
    stopwords: &'a Stopwords,
    morph: &'a dyn MorphAnalyzer,
}

impl<'a> QuestionAnalyzer<'a> {
    pub fn new(stopwords: &'a Stopwords, morph: &'a dyn MorphAnalyzer) -> Self {
        QuestionAnalyzer { stopwords, morph }
    }

    fn is_content(&self, tok: &Token) -> bool {
        !tok.normalized.is_empty() && !tok.is_punctuation() && !self.stopwords.is_stopword(tok)
    }

    fn keywords_from(&self, tokens: &[Token], particle_idx: usize) -> Result<Vec<String>, AnalysisError> {
        let mut seen = HashSet::new();
        let keywords: Vec<String> = tokens
            .iter()
            .enumerate()
            .filter(|&(i, tok)| i != particle_idx && self.is_content(tok) && particle_type(&tok.normalized).is_none())
            .filter(|(_, tok)| seen.insert(tok.normalized.clone()))
            .map(|(_, tok)| tok.normalized.clone())
            .collect();
        if keywords.is_empty() {
            Err(AnalysisError::EmptyKeywords)
        } else {
            Ok(keywords)
        }
    }

    fn focus_from(&self, declarative: &[Token], particle_idx: usize, ty: ExpectedAnswerType) -> Vec<String> {
        let tags = tag_tokens(declarative, self.morph, ty);
        let start = tags.iter().position(|&t| t == MorphTag::Verb).map_or(particle_idx, |v| v + 1);
        let run: Vec<String> = declarative
            .iter()
            .skip(start)
            .take_while(|tok| self.is_content(tok))
            .map(|tok| tok.normalized.clone())
            .collect();
        if !run.is_empty() {
            return run;
        }
        declarative
            .iter()
            .rev()
            .find(|tok| self.is_content(tok))
            .map(|tok| vec![tok.normalized.clone()])
            .unwrap_or_default()
    }

    pub fn extract_keywords(&self, question: &Question) -> Result<Vec<String>, AnalysisError> {
        let tokens = tokenize(&question.text);
        let (idx, _) = detect_in_tokens(&tokens)?;
        self.keywords_from(&tokens, idx)
    }

    /// Maximal run of content tokens after the first verb of the declarative
    /// form, or after the particle position when there is no verb.
    pub fn extract_focus(&self, question: &Question) -> Result<Vec<String>, AnalysisError> {
        let tokens = tokenize(&question.text);
        let (idx, ty) = detect_in_tokens(&tokens)?;
        self.keywords_from(&tokens, idx)?;
        Ok(self.focus_from(&declarative_tokens(tokens, idx), idx, ty))
    }

    pub fn analyze(&self, question: &Question) -> Result<QuestionAnalysis, AnalysisError> {
        let text = question.text.trim();
        if text.is_empty() {
            return Err(AnalysisError::EmptyQuestion);
        }
        if !text.ends_with(crate::text::QUESTION_MARKS) {
            return Err(AnalysisError::MissingQuestionMark);
        }
        let tokens = tokenize(&question.text);
        let (idx, ty) = detect_in_tokens(&tokens)?;
        let keywords = self.keywords_from(&tokens, idx)?;
        let particle = tokens[idx].surface.clone();
        let declarative = declarative_tokens(tokens, idx);
        let focus = self.focus_from(&declarative, idx, ty);
        Ok(QuestionAnalysis {
            interrogative_particle: particle,
            question_type: ty,
            expected_answer_type: ty,
            keywords,
            focus,
            declarative_form: join_surfaces(&declarative),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;

    fn q(text: &str) -> Question {
        Question::new("t", text, Source::Forum, Domain::WorldNews)
    }

    #[test]
    fn particle_table_is_total_and_distinct_per_question_word() {
        let expected = [
            ("من", ExpectedAnswerType::Person),
            ("أين", ExpectedAnswerType::Location),
            ("متى", ExpectedAnswerType::Date),
            ("ماهي", ExpectedAnswerType::Organization),
            ("ماهو", ExpectedAnswerType::Organization),
            ("كم", ExpectedAnswerType::NumericExpression),
        ];
        for (word, ty) in expected {
            assert_eq!(particle_type(&crate::text::normalize(word)), Some(ty), "{word}");
        }
        let types: HashSet<_> = INTERROGATIVES.iter().map(|&(_, t)| t).collect();
        assert_eq!(types.len(), 5);
    }

    #[test]
    fn detect_examples() {
        let (tok, ty) = detect_interrogative(&q("من صمم برج ايفل؟")).unwrap();
        assert_eq!((tok.surface.as_str(), ty), ("من", ExpectedAnswerType::Person));
        let (tok, ty) = detect_interrogative(&q("كم يبلغ طول نهر الأمازون؟")).unwrap();
        assert_eq!((tok.surface.as_str(), ty), ("كم", ExpectedAnswerType::NumericExpression));
        assert_eq!(detect_interrogative(&q("هل تونس في افريقيا؟")), Err(AnalysisError::NoInterrogativeFound));
    }

    #[test]
    fn min_is_only_accepted_first() {
        assert_eq!(detect_interrogative(&q("هل جاء من تونس؟")), Err(AnalysisError::NoInterrogativeFound));
        // first match wins when two particles occur
        let (_, ty) = detect_interrogative(&q("متى و أين ولد المتنبي؟")).unwrap();
        assert_eq!(ty, ExpectedAnswerType::Date);
    }

    #[test]
    fn keyword_examples() {
        let res = Resources::builtin();
        let a = res.question_analyzer();
        assert_eq!(a.extract_keywords(&q("من صمم برج ايفل؟")).unwrap(), ["صمم", "برج", "ايفل"]);
        assert_eq!(a.extract_keywords(&q("متى استقلت تونس؟")).unwrap(), ["استقلت", "تونس"]);
        assert_eq!(a.extract_keywords(&q("من؟")), Err(AnalysisError::EmptyKeywords));
        // stopwords and duplicates dropped
        assert_eq!(a.extract_keywords(&q("أين تقع مدينة في مدينة تونس؟")).unwrap(), ["تقع", "مدينة", "تونس"]);
    }

    #[test]
    fn focus_examples() {
        let res = Resources::builtin();
        let a = res.question_analyzer();
        assert_eq!(a.extract_focus(&q("من صمم برج ايفل؟")).unwrap(), ["برج", "ايفل"]);
        assert_eq!(a.extract_focus(&q("ماهي عاصمة ماليزيا؟")).unwrap(), ["عاصمة", "ماليزيا"]);
        assert_eq!(a.extract_focus(&q("متى استقلت تونس؟")).unwrap(), ["تونس"]);
    }

    #[test]
    fn focus_falls_back_to_last_content_token() {
        let res = Resources::builtin();
        let a = res.question_analyzer();
        // the token right after the verb is a stopword, so the run is empty
        assert_eq!(a.extract_focus(&q("متى استقلت في تونس؟")).unwrap(), ["تونس"]);
    }

    #[test]
    fn declarative_examples() {
        assert_eq!(to_declarative(&q("من صمم برج ايفل؟")).unwrap(), "صمم برج ايفل");
        assert_eq!(to_declarative(&q("متى استقلت تونس؟")).unwrap(), "استقلت تونس");
        assert_eq!(to_declarative(&q("كم يبلغ طول نهر الأمازون؟")).unwrap(), "يبلغ طول نهر الأمازون");
    }

    #[test]
    fn analyze_examples() {
        let res = Resources::builtin();
        let a = res.question_analyzer();
        let eiffel = a.analyze(&q("من صمم برج ايفل؟")).unwrap();
        assert_eq!(eiffel.interrogative_particle, "من");
        assert_eq!(eiffel.expected_answer_type, ExpectedAnswerType::Person);
        assert_eq!(eiffel.keywords, ["صمم", "برج", "ايفل"]);
        assert_eq!(eiffel.focus_phrase(), "برج ايفل");
        assert_eq!(eiffel.declarative_form, "صمم برج ايفل");

        let niagara = a.analyze(&q("أين تقع شلالات نياغرا؟")).unwrap();
        assert_eq!(niagara.interrogative_particle, "أين");
        assert_eq!(niagara.expected_answer_type, ExpectedAnswerType::Location);
        assert_eq!(niagara.keywords, ["تقع", "شلالات", "نياغرا"]);
        assert_eq!(niagara.focus_phrase(), "شلالات نياغرا");
        assert_eq!(niagara.declarative_form, "تقع شلالات نياغرا");

        assert_eq!(a.analyze(&q("")), Err(AnalysisError::EmptyQuestion));
        assert_eq!(a.analyze(&q("من صمم برج ايفل")), Err(AnalysisError::MissingQuestionMark));
    }

    #[test]
    fn source_and_domain_names() {
        assert_eq!(Source::Faq.to_string(), "FAQ");
        assert_eq!("HISTORY_ISLAM".parse::<Domain>(), Ok(Domain::HistoryIslam));
        assert!("OTHER".parse::<Domain>().is_err());
    }
}
