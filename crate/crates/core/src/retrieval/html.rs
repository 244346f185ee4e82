//! Best-effort HTML to plain text.

/// Elements whose content is dropped entirely.
const SKIPPED: &[&str] = &["script", "style", "head", "noscript", "template", "svg", "iframe", "object"];

/// Elements that start or end a paragraph.
const BLOCKS: &[&str] = &[
    "address",
    "article",
    "aside",
    "blockquote",
    "body",
    "dd",
    "details",
    "div",
    "dl",
    "dt",
    "fieldset",
    "figcaption",
    "figure",
    "footer",
    "form",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "header",
    "hr",
    "html",
    "li",
    "main",
    "nav",
    "ol",
    "p",
    "pre",
    "section",
    "summary",
    "table",
    "tbody",
    "tfoot",
    "thead",
    "title",
    "tr",
    "ul",
];

/// Elements that end a line but not a paragraph.
const LINE_BREAKS: &[&str] = &["br", "td", "th"];

fn find_ci(haystack: &str, needle: &str, from: usize) -> Option<usize> {
    haystack.get(from..)?.to_ascii_lowercase().find(needle).map(|i| from + i)
}

/// Byte index just past the `>` closing the tag that starts at `start`.
/// Quoted attribute values may contain `>`; an unbalanced quote is ignored.
fn tag_end(html: &str, start: usize) -> usize {
    let bytes = html.as_bytes();
    let mut quote = None;
    for (i, &b) in bytes.iter().enumerate().skip(start + 1) {
        match (quote, b) {
            (None, b'"' | b'\'') => quote = Some(b),
            (Some(q), _) if q == b => quote = None,
            (None, b'>') => return i + 1,
            _ => {}
        }
    }
    html[start..].find('>').map_or(html.len(), |i| start + i + 1)
}

fn strip_tags(html: &str) -> String {
    let mut out = String::with_capacity(html.len() / 2);
    let mut i = 0;
    while i < html.len() {
        let rest = &html[i..];
        if !rest.starts_with('<') {
            let end = rest.find('<').map_or(html.len(), |j| i + j);
            out.push_str(&html_escape::decode_html_entities(&html[i..end]));
            i = end;
            continue;
        }
        if rest.starts_with("<!--") {
            i = html[i + 4..].find("-->").map_or(html.len(), |j| i + 4 + j + 3);
            continue;
        }
        let next = rest[1..].chars().next();
        match next {
            Some('!' | '?') => {
                i = tag_end(html, i);
                continue;
            }
            Some(c) if c.is_ascii_alphabetic() || c == '/' => {}
            _ => {
                out.push('<');
                i += 1;
                continue;
            }
        }

        let closing = next == Some('/');
        let name_start = i + 1 + usize::from(closing);
        let name: String = html[name_start..]
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let end = tag_end(html, i);
        let self_closing = html[i..end].trim_end_matches('>').ends_with('/');
        i = end;

        if !closing && !self_closing && SKIPPED.contains(&name.as_str()) {
            let close = find_ci(html, &format!("</{name}"), i);
            let close = if name == "head" {
                match (close, find_ci(html, "<body", i)) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            } else {
                close
            };
            i = close.map_or(html.len(), |c| if html[c..].starts_with("</") { tag_end(html, c) } else { c });
            continue;
        }
        if BLOCKS.contains(&name.as_str()) {
            out.push_str("\n\n");
        } else if LINE_BREAKS.contains(&name.as_str()) {
            out.push('\n');
        }
    }
    out
}

/// Separates any `<` that would read as the start of a tag.
fn defuse_angle_brackets(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        out.push(c);
        if c == '<' && chars.peek().is_some_and(|n| n.is_ascii_alphabetic() || matches!(n, '/' | '!' | '?')) {
            out.push(' ');
        }
    }
    out
}

/// Removes markup and returns the visible text.
///
/// Script, style and head content is dropped, entities are decoded, block
/// elements become blank-line paragraph breaks, `<br>` and table cells become
/// line breaks, and whitespace is collapsed within each line. Malformed markup
/// never fails; unterminated tags swallow the rest of the input.
pub fn html_to_text(html: &str) -> String {
    let text = defuse_angle_brackets(&strip_tags(html));
    let mut lines: Vec<String> = Vec::new();
    for line in text.split('\n') {
        let collapsed = line.split_whitespace().collect::<Vec<_>>().join(" ");
        if collapsed.is_empty() && lines.last().is_none_or(|l| l.is_empty()) {
            continue;
        }
        lines.push(collapsed);
    }
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    lines.join("\n")
}
