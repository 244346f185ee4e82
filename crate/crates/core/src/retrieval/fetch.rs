use std::time::Duration;

use encoding_rs::{Encoding, UTF_8};

use super::provider::PageFetcher;
use super::{FetchedPage, RetrievalError, UrlRecord};

pub const USER_AGENT: &str = concat!("aqa-webcorp/", env!("CARGO_PKG_VERSION"), " (Arabic QA corpus builder)");

/// Bytes of the document scanned for a `<meta charset>` declaration.
const META_SNIFF_BYTES: usize = 4096;
const MAX_PAGE_BYTES: u64 = 16 * 1024 * 1024;

fn charset_label(s: &str) -> Option<&str> {
    let lower = s.to_ascii_lowercase();
    let at = lower.find("charset")?;
    let rest = s[at + "charset".len()..].trim_start();
    let rest = rest.strip_prefix('=')?.trim_start();
    let rest = rest.trim_start_matches(['"', '\'']);
    let end = rest.find(|c: char| !(c.is_ascii_alphanumeric() || "-_:.".contains(c))).unwrap_or(rest.len());
    (end > 0).then(|| &rest[..end])
}

fn meta_charset(bytes: &[u8]) -> Option<&'static Encoding> {
    let head = String::from_utf8_lossy(&bytes[..bytes.len().min(META_SNIFF_BYTES)]);
    let lower = head.to_ascii_lowercase();
    let mut from = 0;
    while let Some(idx) = lower[from..].find("<meta") {
        let start = from + idx;
        let end = lower[start..].find('>').map_or(lower.len(), |e| start + e);
        if let Some(enc) = charset_label(&head[start..end]).and_then(|l| Encoding::for_label(l.as_bytes())) {
            // a page can only be sniffed as an ASCII-compatible encoding
            return Some(if enc.is_ascii_compatible() { enc } else { UTF_8 });
        }
        from = end;
    }
    None
}

/// Picks the page encoding: HTTP `Content-Type` charset, then `<meta>` charset, then UTF-8.
pub fn detect_encoding(content_type: Option<&str>, bytes: &[u8]) -> &'static Encoding {
    content_type
        .and_then(charset_label)
        .and_then(|l| Encoding::for_label(l.as_bytes()))
        .or_else(|| meta_charset(bytes))
        .unwrap_or(UTF_8)
}

#[derive(Debug, Clone)]
pub struct HttpOptions {
    pub timeout: Duration,
    /// When non-empty, only these hosts (or their subdomains) are fetched.
    pub allow_hosts: Vec<String>,
    pub deny_hosts: Vec<String>,
}

impl Default for HttpOptions {
    fn default() -> Self {
        HttpOptions { timeout: Duration::from_millis(10_000), allow_hosts: Vec::new(), deny_hosts: Vec::new() }
    }
}

fn host_matches(host: &str, pattern: &str) -> bool {
    let pattern = pattern.trim().trim_start_matches("*.");
    host.eq_ignore_ascii_case(pattern)
        || host.to_ascii_lowercase().ends_with(&format!(".{}", pattern.to_ascii_lowercase()))
}

/// Fetches pages over HTTP(S) with GET.
pub struct HttpFetcher {
    agent: ureq::Agent,
    options: HttpOptions,
}

impl HttpFetcher {
    pub fn new(options: HttpOptions) -> Self {
        HttpFetcher { agent: agent(options.timeout), options }
    }

    fn permitted(&self, host: &str) -> Result<(), String> {
        if self.options.deny_hosts.iter().any(|p| host_matches(host, p)) {
            return Err(format!("host {host} is denied by configuration"));
        }
        if !self.options.allow_hosts.is_empty() && !self.options.allow_hosts.iter().any(|p| host_matches(host, p)) {
            return Err(format!("host {host} is not in the allow list"));
        }
        Ok(())
    }
}

pub(crate) fn agent(timeout: Duration) -> ureq::Agent {
    ureq::Agent::config_builder().timeout_global(Some(timeout)).user_agent(USER_AGENT).build().into()
}

impl PageFetcher for HttpFetcher {
    fn fetch(&self, u: &UrlRecord) -> Result<FetchedPage, RetrievalError> {
        let failed = |cause: String| RetrievalError::FetchFailed { url: u.url.clone(), cause };
        self.permitted(&u.host).map_err(failed)?;
        let mut response = self.agent.get(&u.url).call().map_err(|e| failed(e.to_string()))?;
        let content_type = response.headers().get("content-type").and_then(|v| v.to_str().ok()).map(str::to_string);
        let bytes =
            response.body_mut().with_config().limit(MAX_PAGE_BYTES).read_to_vec().map_err(|e| failed(e.to_string()))?;
        Ok(FetchedPage::new(u.clone(), bytes, content_type.as_deref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_beats_meta() {
        let html = br#"<html><head><meta charset="windows-1256"></head></html>"#;
        assert_eq!(detect_encoding(Some("text/html; charset=UTF-8"), html), UTF_8);
        assert_eq!(detect_encoding(None, html).name(), "windows-1256");
        assert_eq!(detect_encoding(Some("text/html"), html).name(), "windows-1256");
    }

    #[test]
    fn http_equiv_meta() {
        let html = br#"<meta http-equiv="Content-Type" content="text/html; charset=iso-8859-6">"#;
        assert_eq!(detect_encoding(None, html).name(), "ISO-8859-6");
    }

    #[test]
    fn falls_back_to_utf8() {
        assert_eq!(detect_encoding(None, b"<p>x</p>"), UTF_8);
        assert_eq!(detect_encoding(Some("text/html; charset=bogus"), b""), UTF_8);
    }

    #[test]
    fn host_lists() {
        let f = HttpFetcher::new(HttpOptions {
            allow_hosts: vec!["wikipedia.org".into()],
            deny_hosts: vec!["bad.wikipedia.org".into()],
            ..HttpOptions::default()
        });
        assert!(f.permitted("ar.wikipedia.org").is_ok());
        assert!(f.permitted("bad.wikipedia.org").is_err());
        assert!(f.permitted("example.com").is_err());
        let u = UrlRecord::parse("http://example.com/", 1).unwrap();
        assert!(matches!(f.fetch(&u), Err(RetrievalError::FetchFailed { .. })));
    }

    #[test]
    fn unreachable_url_fails() {
        let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let f = HttpFetcher::new(HttpOptions { timeout: Duration::from_millis(500), ..HttpOptions::default() });
        let u = UrlRecord::parse(&format!("http://127.0.0.1:{port}/page"), 1).unwrap();
        assert!(matches!(f.fetch(&u), Err(RetrievalError::FetchFailed { .. })));
    }
}
