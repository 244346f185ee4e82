//! First-order logic forms for analyzed questions.
//!
//! A form is an existentially quantified conjunction. `X` is always the answer,
//! the first conjunct is the answer-type predicate, and the remaining conjuncts
//! come from the verb and nouns of the declarative question:
//!
//! | type               | shape                                                        |
//! |--------------------|--------------------------------------------------------------|
//! | PERSON             | `PERSON(X) ∧ verb(X,Y) ∧ noun(Y) ...`                        |
//! | LOCATION / DATE    | `LOCATION(X) ∧ verb(Y,X) ∧ noun(Y) ...`                      |
//! | ORGANIZATION       | `ORGANIZATION(X) ∧ head(Y,X) ∧ noun(Y) ...`                  |
//! | NUMERIC_EXPRESSION | `NUMERICAL_EXPRESSION(X) ∧ verb(Y,Z,X) ∧ head(Y) ∧ noun(Z) ...` |

pub mod morph;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::question::{ExpectedAnswerType, QuestionAnalysis};
use morph::{MorphTag, TaggedToken};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("declarative form is empty")]
    EmptyDeclarative,
    #[error("{0} questions need a verb but none was tagged")]
    MissingVerb(ExpectedAnswerType),
    #[error("no noun found in the declarative form")]
    MissingNoun,
    #[error("invalid logic form: {0}")]
    Invalid(String),
    #[error("cannot parse logic form at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    X,
    Y,
    Z,
}

impl Variable {
    pub fn name(self) -> char {
        match self {
            Variable::X => 'X',
            Variable::Y => 'Y',
            Variable::Z => 'Z',
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "X" => Some(Variable::X),
            "Y" => Some(Variable::Y),
            "Z" => Some(Variable::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Functor {
    AnswerType(ExpectedAnswerType),
    Lexical(String),
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::AnswerType(t) => f.write_str(t.predicate_name()),
            Functor::Lexical(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    functor: Functor,
    args: Vec<Variable>,
}

impl Predicate {
    pub fn new(functor: Functor, args: Vec<Variable>) -> Result<Self, LogicError> {
        if !(1..=3).contains(&args.len()) {
            return Err(LogicError::Invalid(format!("{functor} has arity {}, expected 1 to 3", args.len())));
        }
        if let Functor::AnswerType(_) = functor {
            if args != [Variable::X] {
                return Err(LogicError::Invalid(format!("{functor} must take exactly X")));
            }
        }
        if let Functor::Lexical(name) = &functor {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "(),∧∃".contains(c)) {
                return Err(LogicError::Invalid(format!("bad functor name {name:?}")));
            }
        }
        Ok(Predicate { functor, args })
    }

    pub fn answer_type(ty: ExpectedAnswerType) -> Self {
        Predicate { functor: Functor::AnswerType(ty), args: vec![Variable::X] }
    }

    fn lexical(name: &str, args: &[Variable]) -> Result<Self, LogicError> {
        Predicate::new(Functor::Lexical(name.to_string()), args.to_vec())
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn args(&self) -> &[Variable] {
        &self.args
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_answer_type(&self) -> bool {
        matches!(self.functor, Functor::AnswerType(_))
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.functor)?;
        for (i, v) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v.name())?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogicForm {
    quantified: Vec<Variable>,
    conjuncts: Vec<Predicate>,
}

impl LogicForm {
    pub fn new(quantified: Vec<Variable>, conjuncts: Vec<Predicate>) -> Result<Self, LogicError> {
        let first = conjuncts.first().ok_or_else(|| LogicError::Invalid("no conjuncts".into()))?;
        if !first.is_answer_type() {
            return Err(LogicError::Invalid("first conjunct must be the answer type".into()));
        }
        if conjuncts.iter().filter(|p| p.is_answer_type()).count() != 1 {
            return Err(LogicError::Invalid("exactly one answer-type predicate allowed".into()));
        }
        let declared: BTreeSet<_> = quantified.iter().copied().collect();
        if declared.len() != quantified.len() {
            return Err(LogicError::Invalid("variable quantified twice".into()));
        }
        let used: BTreeSet<_> = conjuncts.iter().flat_map(|p| p.args.iter().copied()).collect();
        if declared != used {
            return Err(LogicError::Invalid(format!("quantified {declared:?} but conjuncts use {used:?}")));
        }
        Ok(LogicForm { quantified, conjuncts })
    }

    pub fn quantified_vars(&self) -> &[Variable] {
        &self.quantified
    }

    pub fn conjuncts(&self) -> &[Predicate] {
        &self.conjuncts
    }

    pub fn answer_type(&self) -> ExpectedAnswerType {
        match self.conjuncts[0].functor {
            Functor::AnswerType(t) => t,
            Functor::Lexical(_) => unreachable!("checked in LogicForm::new"),
        }
    }

    /// Canonical rendering, e.g. `∃X, ∃Y, PERSON(X) ∧ صمم(X,Y) ∧ برج(Y)`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Result<Self, LogicError> {
        parse_logic_form(s)
    }
}

impl fmt::Display for LogicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.quantified {
            write!(f, "∃{}, ", v.name())?;
        }
        for (i, p) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub fn render_logic_form(lf: &LogicForm) -> String {
    lf.render()
}

fn parse_error(offset: usize, reason: impl Into<String>) -> LogicError {
    LogicError::Parse { offset, reason: reason.into() }
}

/// Inverse of [`render_logic_form`]. Whitespace around separators is optional.
pub fn parse_logic_form(input: &str) -> Result<LogicForm, LogicError> {
    let mut rest = input.trim_start();
    let offset = |rest: &str| input.len() - rest.len();

    let mut quantified = Vec::new();
    while let Some(after) = rest.strip_prefix('∃') {
        let after = after.trim_start();
        let name_len = after.chars().next().map_or(0, char::len_utf8);
        let var = Variable::from_name(&after[..name_len])
            .ok_or_else(|| parse_error(offset(after), "expected X, Y or Z after ∃"))?;
        quantified.push(var);
        rest = after[name_len..].trim_start();
        rest = rest
            .strip_prefix(',')
            .ok_or_else(|| parse_error(offset(rest), "expected ',' after quantifier"))?
            .trim_start();
    }
    if quantified.is_empty() {
        return Err(parse_error(offset(rest), "expected ∃"));
    }

    let mut conjuncts = Vec::new();
    for part in rest.split('∧') {
        let part_offset = offset(part);
        let part = part.trim();
        let open = part.find('(').ok_or_else(|| parse_error(part_offset, "expected '(' in predicate"))?;
        let body = part[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| parse_error(part_offset, "predicate must end with ')'"))?;
        let name = part[..open].trim();
        let args = body
            .split(',')
            .map(|a| {
                Variable::from_name(a.trim()).ok_or_else(|| parse_error(part_offset, format!("bad argument {a:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let functor = match ExpectedAnswerType::from_predicate_name(name) {
            Some(t) => Functor::AnswerType(t),
            None => Functor::Lexical(name.to_string()),
        };
        conjuncts.push(Predicate::new(functor, args)?);
    }
    LogicForm::new(quantified, conjuncts)
}

/// Builds the logic form of an analyzed question from its tagged declarative form.
///
/// Only the first verb is used; later verbs and particles are ignored.
pub fn generate_logic_form(analysis: &QuestionAnalysis, tagged: &[TaggedToken]) -> Result<LogicForm, LogicError> {
    use Variable::{X, Y, Z};

    let ty = analysis.expected_answer_type;
    let verb = tagged.iter().find(|t| t.tag == MorphTag::Verb);
    let nouns: Vec<&TaggedToken> = tagged.iter().filter(|t| t.tag == MorphTag::Noun).collect();
    let (head, rest) = nouns.split_first().ok_or(LogicError::MissingNoun)?;
    let verb = || verb.ok_or(LogicError::MissingVerb(ty));

    let mut conjuncts = vec![Predicate::answer_type(ty)];
    let vars = match ty {
        ExpectedAnswerType::Person | ExpectedAnswerType::Location | ExpectedAnswerType::Date => {
            let args: &[Variable] = if ty == ExpectedAnswerType::Person { &[X, Y] } else { &[Y, X] };
            conjuncts.push(Predicate::lexical(verb()?.functor(), args)?);
            for noun in &nouns {
                conjuncts.push(Predicate::lexical(noun.functor(), &[Y])?);
            }
            vec![X, Y]
        }
        ExpectedAnswerType::Organization => {
            conjuncts.push(Predicate::lexical(head.functor(), &[Y, X])?);
            for noun in rest {
                conjuncts.push(Predicate::lexical(noun.functor(), &[Y])?);
            }
            vec![X, Y]
        }
        ExpectedAnswerType::NumericExpression => {
            conjuncts.push(Predicate::lexical(verb()?.functor(), &[Y, Z, X])?);
            conjuncts.push(Predicate::lexical(head.functor(), &[Y])?);
            for noun in rest {
                conjuncts.push(Predicate::lexical(noun.functor(), &[Z])?);
            }
            vec![X, Y, Z]
        }
    };
    LogicForm::new(vars, conjuncts)
}
