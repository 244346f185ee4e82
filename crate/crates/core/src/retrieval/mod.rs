//! Passage retrieval: query construction, URL search, page fetching, HTML
//! stripping, passage segmentation and ranking.

mod fetch;
mod html;
mod passage;
mod pipeline;
mod provider;

use std::time::SystemTime;

use encoding_rs::Encoding;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::question::{AnalysisError, QuestionAnalysis};

pub use fetch::{detect_encoding, HttpFetcher, HttpOptions, USER_AGENT};
pub use html::html_to_text;
pub use passage::{filter_and_rank, segment_passages, RankOptions};
pub use pipeline::{retrieve, PageText, RetrievalRun, Retriever};
pub use provider::{FixtureProvider, LiveProvider, PageFetcher, SearchProvider};

pub const DEFAULT_MAX_RESULTS: usize = 10;
pub const DEFAULT_FETCH_CONCURRENCY: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RetrievalError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("search provider unavailable: {0}")]
    ProviderUnavailable(String),
    #[error("fetching {url} failed: {cause}")]
    FetchFailed { url: String, cause: String },
    #[error("invalid URL {url:?}: {reason}")]
    InvalidUrl { url: String, reason: String },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// First 16 lowercase hex digits of the SHA-256 of `s`.
///
/// Names fixture directories (`<query-hash>`, from [`SearchQuery::query_string`])
/// and fixture pages (`<url-hash>`, from [`UrlRecord::url`]).
pub fn stable_hash(s: &str) -> String {
    Sha256::digest(s.as_bytes())[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchQuery {
    pub terms: Vec<String>,
    pub focus: String,
    pub max_results: usize,
}

impl SearchQuery {
    /// Normalized terms joined by single spaces; what the provider is asked for.
    pub fn query_string(&self) -> String {
        self.terms.join(" ")
    }
}

pub fn build_query(analysis: &QuestionAnalysis, max_results: usize) -> Result<SearchQuery, RetrievalError> {
    if max_results == 0 {
        return Err(RetrievalError::InvalidQuery("max_results must be at least 1".into()));
    }
    if analysis.keywords.is_empty() {
        return Err(AnalysisError::EmptyKeywords.into());
    }
    Ok(SearchQuery { terms: analysis.keywords.clone(), focus: analysis.focus_phrase(), max_results })
}

/// One search result.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UrlRecord {
    /// Serialized absolute URL.
    pub url: String,
    /// 1-based position in the provider's result list.
    pub rank: usize,
    pub protocol: String,
    pub host: String,
    pub query: Option<String>,
}

impl UrlRecord {
    pub fn parse(raw: &str, rank: usize) -> Result<Self, RetrievalError> {
        let invalid = |reason: String| RetrievalError::InvalidUrl { url: raw.to_string(), reason };
        let parsed = url::Url::parse(raw.trim()).map_err(|e| invalid(e.to_string()))?;
        let host = parsed.host_str().ok_or_else(|| invalid("URL has no host".into()))?.to_string();
        Ok(UrlRecord {
            url: parsed.as_str().to_string(),
            rank,
            protocol: parsed.scheme().to_string(),
            host,
            query: parsed.query().map(str::to_string),
        })
    }
}

/// Raw page bytes and the encoding they were decoded with.
#[derive(Debug, Clone)]
pub struct FetchedPage {
    pub source: UrlRecord,
    pub html: Vec<u8>,
    pub encoding: &'static Encoding,
    pub fetched_at: SystemTime,
}

impl FetchedPage {
    pub fn new(source: UrlRecord, html: Vec<u8>, content_type: Option<&str>) -> Self {
        let encoding = detect_encoding(content_type, &html);
        FetchedPage { source, html, encoding, fetched_at: SystemTime::now() }
    }

    /// Decoded markup. Malformed byte sequences become U+FFFD.
    pub fn decoded(&self) -> String {
        let (text, _, _) = self.encoding.decode(&self.html);
        text.into_owned()
    }

    pub fn text(&self) -> String {
        html_to_text(&self.decoded())
    }
}

/// A paragraph- or sentence-sized span of page text, with its ranking evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub text: String,
    pub source_url: String,
    #[serde(default)]
    pub source_rank: usize,
    #[serde(default)]
    pub position: usize,
    #[serde(default)]
    pub keyword_hits: usize,
    #[serde(default)]
    pub focus_hit: bool,
    #[serde(default)]
    pub ne_validated: bool,
    pub score: u32,
}

impl Passage {
    pub fn unscored(text: String, position: usize) -> Self {
        Passage {
            text,
            source_url: String::new(),
            source_rank: 0,
            position,
            keyword_hits: 0,
            focus_hit: false,
            ne_validated: false,
            score: 0,
        }
    }

    /// Ordering key: score descending, then source rank and position ascending.
    pub fn rank_key(&self) -> (std::cmp::Reverse<u32>, usize, usize) {
        (std::cmp::Reverse(self.score), self.source_rank, self.position)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::question::{Domain, Question, Source};
    use crate::resources::Resources;

    fn analysis(text: &str) -> QuestionAnalysis {
        Resources::builtin()
            .question_analyzer()
            .analyze(&Question::new("t", text, Source::Faq, Domain::WorldNews))
            .unwrap()
    }

    #[test]
    fn query_examples() {
        let q = build_query(&analysis("من صمم برج ايفل؟"), DEFAULT_MAX_RESULTS).unwrap();
        assert_eq!(q.terms, ["صمم", "برج", "ايفل"]);
        assert_eq!(q.focus, "برج ايفل");
        assert_eq!(q.max_results, 10);
        assert!(matches!(build_query(&analysis("من صمم برج ايفل؟"), 0), Err(RetrievalError::InvalidQuery(_))));
        let q = build_query(&analysis("متى استقلت تونس؟"), 3).unwrap();
        assert_eq!(q.terms, ["استقلت", "تونس"]);
    }

    #[test]
    fn url_components() {
        let u = UrlRecord::parse("https://ar.wikipedia.org/w/index.php?title=x", 2).unwrap();
        assert_eq!(u.protocol, "https");
        assert_eq!(u.host, "ar.wikipedia.org");
        assert_eq!(u.query.as_deref(), Some("title=x"));
        assert_eq!(u.rank, 2);
        assert!(UrlRecord::parse("not a url", 1).is_err());
        assert!(UrlRecord::parse("mailto:someone@example.com", 1).is_err());
    }

    #[test]
    fn stable_hash_is_fixed() {
        // sha256("abc") = ba7816bf8f01cfea...
        assert_eq!(stable_hash("abc"), "ba7816bf8f01cfea");
        assert_eq!(stable_hash("صمم برج ايفل").len(), 16);
    }
}
