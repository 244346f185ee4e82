//! Morphological tagging behind a pluggable analyzer.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::question::ExpectedAnswerType;
use crate::text::{data_lines, normalize, tokenize, Stopwords, Token};
use crate::DataError;

use super::LogicError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphTag {
    Verb,
    Noun,
    Particle,
    Unknown,
}

impl MorphTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MorphTag::Verb => "VERB",
            MorphTag::Noun => "NOUN",
            MorphTag::Particle => "PARTICLE",
            MorphTag::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for MorphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MorphTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "VERB" => Ok(MorphTag::Verb),
            "NOUN" => Ok(MorphTag::Noun),
            "PARTICLE" => Ok(MorphTag::Particle),
            "UNKNOWN" => Ok(MorphTag::Unknown),
            other => Err(format!("unknown morphological tag {other:?}")),
        }
    }
}

/// What an analyzer knows about one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphEntry {
    pub tag: MorphTag,
    /// Citation form used as the predicate functor instead of the surface form.
    pub citation: Option<String>,
}

impl MorphEntry {
    pub fn unknown() -> Self {
        MorphEntry { tag: MorphTag::Unknown, citation: None }
    }
}

/// Assigns grammatical categories to tokens. Implementations must not rely on
/// shared mutable state; the pipeline calls them from several threads.
pub trait MorphAnalyzer: Send + Sync {
    fn lookup(&self, token: &Token) -> MorphEntry;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub token: Token,
    pub tag: MorphTag,
    pub citation: Option<String>,
}

impl TaggedToken {
    /// Functor name for this token: the citation form when known, else the normalized surface.
    pub fn functor(&self) -> &str {
        self.citation.as_deref().unwrap_or(&self.token.normalized)
    }
}

/// Token-to-tag table loaded from `morph_lexicon.tsv`.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, MorphEntry>,
}

impl Lexicon {
    /// Parses `token<TAB>tag<TAB>citation_form` lines; the third column is optional.
    pub fn parse(contents: &str) -> Result<Self, DataError> {
        let mut entries = HashMap::new();
        for (lineno, line) in contents.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if data_lines(line).next().is_none() {
                continue;
            }
            let mut cols = line.split('\t').map(str::trim);
            let (token, tag) = match (cols.next(), cols.next()) {
                (Some(t), Some(g)) if !t.is_empty() => (t, g),
                _ => {
                    return Err(DataError::Malformed {
                        file: "morph_lexicon.tsv".into(),
                        line: lineno + 1,
                        reason: "expected token<TAB>tag".into(),
                    })
                }
            };
            let tag = tag.parse().map_err(|reason| DataError::Malformed {
                file: "morph_lexicon.tsv".into(),
                line: lineno + 1,
                reason,
            })?;
            let citation = cols.next().filter(|c| !c.is_empty()).map(normalize);
            entries.insert(normalize(token), MorphEntry { tag, citation });
        }
        Ok(Lexicon { entries })
    }

    pub fn builtin() -> Self {
        Self::parse(include_str!("../../data/morph_lexicon.tsv")).expect("shipped lexicon parses")
    }

    pub fn get(&self, normalized: &str) -> Option<&MorphEntry> {
        self.entries.get(normalized)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &MorphEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Built-in analyzer: lexicon lookup, with stopwords tagged as particles.
#[derive(Debug, Clone)]
pub struct LexiconAnalyzer {
    lexicon: Lexicon,
    stopwords: Stopwords,
}

impl LexiconAnalyzer {
    pub fn new(lexicon: Lexicon, stopwords: Stopwords) -> Self {
        LexiconAnalyzer { lexicon, stopwords }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }
}

impl MorphAnalyzer for LexiconAnalyzer {
    fn lookup(&self, token: &Token) -> MorphEntry {
        if let Some(entry) = self.lexicon.get(&token.normalized) {
            return entry.clone();
        }
        if self.stopwords.is_stopword(token) {
            return MorphEntry { tag: MorphTag::Particle, citation: None };
        }
        MorphEntry::unknown()
    }
}

fn resolve(entry: MorphEntry, token: &Token, index: usize, ty: ExpectedAnswerType) -> MorphEntry {
    if token.is_punctuation() || token.normalized.is_empty() {
        return MorphEntry { tag: MorphTag::Particle, citation: None };
    }
    match entry.tag {
        MorphTag::Unknown if index == 0 && ty.requires_verb() => MorphEntry { tag: MorphTag::Verb, citation: None },
        MorphTag::Unknown => MorphEntry { tag: MorphTag::Noun, citation: None },
        _ => entry,
    }
}

/// Tags with the fallback applied: unknown first token of a verbal question
/// becomes a verb, other unknown tokens become nouns, punctuation is a particle.
pub(crate) fn tag_tokens(tokens: &[Token], morph: &dyn MorphAnalyzer, ty: ExpectedAnswerType) -> Vec<MorphTag> {
    tokens.iter().enumerate().map(|(i, tok)| resolve(morph.lookup(tok), tok, i, ty).tag).collect()
}

/// Tags every token of a declarative form. No token is left `Unknown`.
pub fn tag_morphology(
    declarative: &str,
    morph: &dyn MorphAnalyzer,
    question_type: ExpectedAnswerType,
) -> Result<Vec<TaggedToken>, LogicError> {
    let tokens = tokenize(declarative);
    if tokens.is_empty() {
        return Err(LogicError::EmptyDeclarative);
    }
    Ok(tokens
        .into_iter()
        .enumerate()
        .map(|(i, token)| {
            let entry = resolve(morph.lookup(&token), &token, i, question_type);
            TaggedToken { token, tag: entry.tag, citation: entry.citation }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(declarative: &str, ty: ExpectedAnswerType) -> Vec<(String, MorphTag)> {
        let analyzer = LexiconAnalyzer::new(Lexicon::builtin(), Stopwords::builtin());
        tag_morphology(declarative, &analyzer, ty).unwrap().into_iter().map(|t| (t.token.surface, t.tag)).collect()
    }

    #[test]
    fn tagging_examples() {
        use MorphTag::*;
        assert_eq!(
            tags("صمم برج ايفل", ExpectedAnswerType::Person),
            [("صمم".into(), Verb), ("برج".into(), Noun), ("ايفل".into(), Noun)]
        );
        assert_eq!(
            tags("عاصمة ماليزيا", ExpectedAnswerType::Organization),
            [("عاصمة".into(), Noun), ("ماليزيا".into(), Noun)]
        );
        let analyzer = LexiconAnalyzer::new(Lexicon::builtin(), Stopwords::builtin());
        assert_eq!(tag_morphology("", &analyzer, ExpectedAnswerType::Person), Err(LogicError::EmptyDeclarative));
    }

    #[test]
    fn fallback_without_lexicon() {
        let bare = LexiconAnalyzer::new(Lexicon::default(), Stopwords::default());
        let tagged = tag_morphology("زار الملك قرطاج", &bare, ExpectedAnswerType::Date).unwrap();
        let got: Vec<_> = tagged.iter().map(|t| t.tag).collect();
        assert_eq!(got, [MorphTag::Verb, MorphTag::Noun, MorphTag::Noun]);
        let tagged = tag_morphology("زار الملك", &bare, ExpectedAnswerType::Organization).unwrap();
        assert!(tagged.iter().all(|t| t.tag == MorphTag::Noun));
    }

    #[test]
    fn citation_forms_come_from_the_lexicon() {
        let analyzer = LexiconAnalyzer::new(Lexicon::builtin(), Stopwords::builtin());
        let tagged = tag_morphology("يبلغ طول", &analyzer, ExpectedAnswerType::NumericExpression).unwrap();
        assert_eq!(tagged[0].functor(), "بلغ");
        assert_eq!(tagged[1].functor(), "طول");
    }

    #[test]
    fn lexicon_rejects_bad_tags() {
        let err = Lexicon::parse("# header\nصمم\tADVERB\n").unwrap_err();
        assert!(matches!(err, DataError::Malformed { line: 2, .. }), "{err}");
        let lex = Lexicon::parse("يبلغ\tVERB\tبلغ\nبرج\tNOUN\n").unwrap();
        assert_eq!(lex.get("يبلغ").unwrap().citation.as_deref(), Some("بلغ"));
        assert_eq!(lex.get("برج").unwrap().citation, None);
    }
}
