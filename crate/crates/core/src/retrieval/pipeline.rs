use tracing::{debug, warn};

use crate::question::{Question, QuestionAnalysis};
use crate::resources::Resources;

use super::provider::{PageFetcher, SearchProvider};
use super::{
    build_query, filter_and_rank, segment_passages, Passage, RankOptions, RetrievalError, SearchQuery, UrlRecord,
    DEFAULT_FETCH_CONCURRENCY, DEFAULT_MAX_RESULTS,
};

/// Plain text of one fetched page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageText {
    pub source: UrlRecord,
    pub text: String,
}

/// Everything one retrieval produced, in rank order.
#[derive(Debug, Clone)]
pub struct RetrievalRun {
    pub analysis: QuestionAnalysis,
    pub query: SearchQuery,
    pub urls: Vec<UrlRecord>,
    pub pages: Vec<PageText>,
    pub failures: Vec<RetrievalError>,
    pub passages: Vec<Passage>,
}

impl RetrievalRun {
    /// Page texts in the order a validator should try them: the page of the
    /// best passage first, then the remaining pages by search rank.
    pub fn candidate_texts(&self) -> Vec<&PageText> {
        let top = self.passages.first().map(|p| p.source_url.as_str());
        let mut pages: Vec<&PageText> = self.pages.iter().collect();
        pages.sort_by_key(|p| (Some(p.source.url.as_str()) != top, p.source.rank));
        pages
    }
}

/// Dependencies of the retrieval pipeline.
pub struct Retriever<'a> {
    pub resources: &'a Resources,
    pub provider: &'a dyn SearchProvider,
    pub fetcher: &'a dyn PageFetcher,
    pub max_results: usize,
    /// Upper bound on simultaneous page fetches.
    pub max_fetch_concurrency: usize,
    pub rank: RankOptions,
}

impl<'a> Retriever<'a> {
    pub fn new(resources: &'a Resources, provider: &'a dyn SearchProvider, fetcher: &'a dyn PageFetcher) -> Self {
        Retriever {
            resources,
            provider,
            fetcher,
            max_results: DEFAULT_MAX_RESULTS,
            max_fetch_concurrency: DEFAULT_FETCH_CONCURRENCY,
            rank: RankOptions::default(),
        }
    }

    fn fetch_all(&self, urls: &[UrlRecord]) -> Vec<Result<PageText, RetrievalError>> {
        let fetch_one =
            |u: &UrlRecord| self.fetcher.fetch(u).map(|page| PageText { source: u.clone(), text: page.text() });
        let pool = rayon::ThreadPoolBuilder::new().num_threads(self.max_fetch_concurrency.max(1)).build();
        match pool {
            Ok(pool) => pool.install(|| {
                use rayon::prelude::*;
                urls.par_iter().map(fetch_one).collect()
            }),
            Err(e) => {
                warn!("falling back to sequential fetches: {e}");
                urls.iter().map(fetch_one).collect()
            }
        }
    }

    /// analyze → query → search → fetch → strip → segment → filter and rank.
    ///
    /// Pages that fail to fetch are skipped and reported in `failures`.
    pub fn run(&self, question: &Question) -> Result<RetrievalRun, RetrievalError> {
        let analysis = self.resources.question_analyzer().analyze(question)?;
        let query = build_query(&analysis, self.max_results)?;
        let urls = self.provider.search(&query)?;
        debug!(question = %question.id, urls = urls.len(), "search done");

        let mut pages = Vec::new();
        let mut failures = Vec::new();
        for result in self.fetch_all(&urls) {
            match result {
                Ok(page) => pages.push(page),
                Err(e) => {
                    warn!("{e}; moving to the next URL");
                    failures.push(e);
                }
            }
        }

        let mut passages: Vec<Passage> = pages
            .iter()
            .flat_map(|page| {
                let segments = segment_passages(&page.text).into_iter().map(|mut p| {
                    p.source_url = page.source.url.clone();
                    p.source_rank = page.source.rank;
                    p
                });
                filter_and_rank(segments.collect(), &analysis, self.resources.gazetteer(), self.rank)
            })
            .collect();
        passages.sort_by_key(Passage::rank_key);

        Ok(RetrievalRun { analysis, query, urls, pages, failures, passages })
    }
}

/// Ranked passages answering `question`.
pub fn retrieve(question: &Question, deps: &Retriever<'_>) -> Result<Vec<Passage>, RetrievalError> {
    deps.run(question).map(|run| run.passages)
}
