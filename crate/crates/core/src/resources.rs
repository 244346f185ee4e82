//! Linguistic data files bundled into one value.

use std::fs;
use std::path::Path;

use crate::logic::morph::{tag_morphology, Lexicon, LexiconAnalyzer, MorphAnalyzer};
use crate::logic::{generate_logic_form, LogicError, LogicForm};
use crate::ner::Gazetteer;
use crate::question::{QuestionAnalysis, QuestionAnalyzer};
use crate::text::Stopwords;
use crate::DataError;

/// Stopwords, morphological lexicon and gazetteer.
///
/// The built-in copies are compiled in from `crates/core/data`; [`Resources::load_dir`]
/// reads replacements from a directory with the same file names.
#[derive(Debug, Clone)]
pub struct Resources {
    stopwords: Stopwords,
    morph: LexiconAnalyzer,
    gazetteer: Gazetteer,
}

impl Resources {
    pub fn builtin() -> Self {
        let stopwords = Stopwords::builtin();
        Resources {
            morph: LexiconAnalyzer::new(Lexicon::builtin(), stopwords.clone()),
            stopwords,
            gazetteer: Gazetteer::builtin(),
        }
    }

    /// Reads `stopwords.txt`, `morph_lexicon.tsv` and the gazetteer files from `dir`.
    /// Files that are absent fall back to the built-in copy.
    pub fn load_dir(dir: &Path) -> Result<Self, DataError> {
        if !dir.is_dir() {
            return Err(DataError::MissingDir(dir.to_path_buf()));
        }
        let read = |name: &str| -> Result<Option<String>, DataError> {
            let path = dir.join(name);
            match fs::read_to_string(&path) {
                Ok(s) => Ok(Some(s)),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
                Err(source) => Err(DataError::Io { path, source }),
            }
        };
        let stopwords = read("stopwords.txt")?.map(|s| Stopwords::parse(&s)).unwrap_or_else(Stopwords::builtin);
        let lexicon = match read("morph_lexicon.tsv")? {
            Some(s) => Lexicon::parse(&s)?,
            None => Lexicon::builtin(),
        };
        Ok(Resources {
            morph: LexiconAnalyzer::new(lexicon, stopwords.clone()),
            stopwords,
            gazetteer: Gazetteer::load_dir(dir)?,
        })
    }

    pub fn stopwords(&self) -> &Stopwords {
        &self.stopwords
    }

    pub fn morph(&self) -> &LexiconAnalyzer {
        &self.morph
    }

    pub fn gazetteer(&self) -> &Gazetteer {
        &self.gazetteer
    }

    pub fn gazetteer_mut(&mut self) -> &mut Gazetteer {
        &mut self.gazetteer
    }

    pub fn question_analyzer(&self) -> QuestionAnalyzer<'_> {
        QuestionAnalyzer::new(&self.stopwords, &self.morph)
    }

    /// Tags the declarative form with the built-in analyzer and builds its logic form.
    pub fn logic_form(&self, analysis: &QuestionAnalysis) -> Result<LogicForm, LogicError> {
        logic_form_with(analysis, &self.morph)
    }
}

pub fn logic_form_with(analysis: &QuestionAnalysis, morph: &dyn MorphAnalyzer) -> Result<LogicForm, LogicError> {
    let tagged = tag_morphology(&analysis.declarative_form, morph, analysis.expected_answer_type)?;
    generate_logic_form(analysis, &tagged)
}
