use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Duration;

use tracing::warn;

use super::fetch::agent;
use super::{stable_hash, FetchedPage, RetrievalError, SearchQuery, UrlRecord};

/// Turns a query into a ranked list of candidate URLs.
pub trait SearchProvider: Send + Sync {
    fn search(&self, query: &SearchQuery) -> Result<Vec<UrlRecord>, RetrievalError>;
}

/// Retrieves the page a URL points to.
pub trait PageFetcher: Send + Sync {
    fn fetch(&self, url: &UrlRecord) -> Result<FetchedPage, RetrievalError>;
}

/// Parses, deduplicates and truncates raw result URLs, assigning 1-based ranks.
fn rank_results(raw: impl IntoIterator<Item = String>, max_results: usize) -> Vec<UrlRecord> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for line in raw {
        if out.len() >= max_results {
            break;
        }
        match UrlRecord::parse(&line, out.len() + 1) {
            Ok(rec) if seen.insert(rec.url.clone()) => out.push(rec),
            Ok(_) => {}
            Err(e) => warn!("skipping search result: {e}"),
        }
    }
    out
}

/// Deterministic provider backed by a directory of recorded results.
///
/// Layout: `<root>/<query-hash>/urls.txt` lists one URL per line in rank order,
/// and `<root>/<query-hash>/pages/<url-hash>.html` holds the raw page bytes.
/// Both hashes are [`stable_hash`] values.
#[derive(Debug, Clone)]
pub struct FixtureProvider {
    root: PathBuf,
}

impl FixtureProvider {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FixtureProvider { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn query_dir(&self, query_string: &str) -> PathBuf {
        self.root.join(stable_hash(query_string))
    }

    /// Writes a fixture for `query_string`: its URL list and any page bodies supplied.
    pub fn record(&self, query_string: &str, urls: &[&str], pages: &[(&str, &[u8])]) -> io::Result<PathBuf> {
        let dir = self.query_dir(query_string);
        fs::create_dir_all(dir.join("pages"))?;
        let mut listing = urls.join("\n");
        listing.push('\n');
        fs::write(dir.join("urls.txt"), listing)?;
        for (url, body) in pages {
            let key = UrlRecord::parse(url, 1).map(|u| u.url).unwrap_or_else(|_| url.to_string());
            fs::write(dir.join("pages").join(format!("{}.html", stable_hash(&key))), body)?;
        }
        Ok(dir)
    }

    fn page_path(&self, url: &str) -> Option<PathBuf> {
        let name = format!("{}.html", stable_hash(url));
        let mut dirs: Vec<PathBuf> =
            fs::read_dir(&self.root).ok()?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.is_dir()).collect();
        dirs.sort();
        dirs.into_iter().map(|d| d.join("pages").join(&name)).find(|p| p.is_file())
    }
}

impl SearchProvider for FixtureProvider {
    fn search(&self, query: &SearchQuery) -> Result<Vec<UrlRecord>, RetrievalError> {
        let path = self.query_dir(&query.query_string()).join("urls.txt");
        let listing = match fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(RetrievalError::ProviderUnavailable(format!("{}: {e}", path.display()))),
        };
        let lines = listing.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::to_string);
        Ok(rank_results(lines, query.max_results))
    }
}

impl PageFetcher for FixtureProvider {
    fn fetch(&self, u: &UrlRecord) -> Result<FetchedPage, RetrievalError> {
        let failed = |cause: String| RetrievalError::FetchFailed { url: u.url.clone(), cause };
        let path = self.page_path(&u.url).ok_or_else(|| failed("no fixture page recorded".into()))?;
        let bytes = fs::read(&path).map_err(|e| failed(format!("{}: {e}", path.display())))?;
        Ok(FetchedPage::new(u.clone(), bytes, None))
    }
}

/// Queries a configurable HTTP search endpoint.
///
/// Sends `GET <endpoint>?q=<terms>&num=<max_results>&key=<credential>` and
/// accepts a JSON body shaped as `{"items":[{"link":..}]}`,
/// `{"results":[{"url":..}]}` or a bare array of URL strings.
pub struct LiveProvider {
    endpoint: String,
    api_key_env: String,
    agent: ureq::Agent,
}

impl LiveProvider {
    pub fn new(endpoint: impl Into<String>, api_key_env: impl Into<String>, timeout: Duration) -> Self {
        LiveProvider { endpoint: endpoint.into(), api_key_env: api_key_env.into(), agent: agent(timeout) }
    }

    fn credential(&self) -> Result<String, RetrievalError> {
        match std::env::var(&self.api_key_env) {
            Ok(k) if !k.trim().is_empty() => Ok(k),
            _ => {
                Err(RetrievalError::ProviderUnavailable(format!("credential variable {} is not set", self.api_key_env)))
            }
        }
    }
}

pub(crate) fn urls_from_json(body: &serde_json::Value) -> Vec<String> {
    let strings = |arr: &Vec<serde_json::Value>, field: &str| -> Vec<String> {
        arr.iter().filter_map(|v| v.get(field).or(Some(v)).and_then(|s| s.as_str())).map(str::to_string).collect()
    };
    if let Some(items) = body.get("items").and_then(|v| v.as_array()) {
        strings(items, "link")
    } else if let Some(results) = body.get("results").and_then(|v| v.as_array()) {
        strings(results, "url")
    } else if let Some(arr) = body.as_array() {
        strings(arr, "url")
    } else {
        Vec::new()
    }
}

impl SearchProvider for LiveProvider {
    fn search(&self, query: &SearchQuery) -> Result<Vec<UrlRecord>, RetrievalError> {
        let key = self.credential()?;
        let unavailable = |e: String| RetrievalError::ProviderUnavailable(e);
        let raw = self
            .agent
            .get(&self.endpoint)
            .query("q", query.query_string())
            .query("num", query.max_results.to_string())
            .query("key", key)
            .call()
            .map_err(|e| unavailable(e.to_string()))?
            .body_mut()
            .read_to_string()
            .map_err(|e| unavailable(e.to_string()))?;
        let body: serde_json::Value =
            serde_json::from_str(&raw).map_err(|e| unavailable(format!("unreadable search response: {e}")))?;
        Ok(rank_results(urls_from_json(&body), query.max_results))
    }
}
