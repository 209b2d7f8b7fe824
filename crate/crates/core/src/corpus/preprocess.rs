//! Raw-text cleanup applied before parsing.
//!
//! The pipeline is an ordered sequence of four individually toggleable steps:
//! strip HTML tags, strip special characters, collapse whitespace, lowercase.
//! Enabled steps run in that fixed order; disabled steps leave the text
//! byte-identical.

/// Selects which cleanup steps run. Defaults: everything on except lowercase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreprocessConfig {
    pub strip_html_tags: bool,
    pub strip_special_chars: bool,
    pub collapse_whitespace: bool,
    pub lowercase: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            strip_html_tags: true,
            strip_special_chars: true,
            collapse_whitespace: true,
            lowercase: false,
        }
    }
}

pub fn preprocess_text(raw: &str, config: &PreprocessConfig) -> String {
    let mut text = raw.to_string();
    if config.strip_html_tags {
        text = strip_html_tags(&text);
    }
    if config.strip_special_chars {
        text = strip_special_chars(&text);
    }
    if config.collapse_whitespace {
        text = collapse_whitespace(&text);
    }
    if config.lowercase {
        text = text.to_lowercase();
    }
    text
}

/// Drop `<...>` spans. An unterminated `<` is kept verbatim.
fn strip_html_tags(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(open) = rest.find('<') {
        out.push_str(&rest[..open]);
        match rest[open..].find('>') {
            Some(close) => rest = &rest[open + close + 1..],
            None => {
                out.push_str(&rest[open..]);
                return out;
            }
        }
    }
    out.push_str(rest);
    out
}

/// Keep alphanumeric characters and whitespace; drop everything else.
fn strip_special_chars(text: &str) -> String {
    text.chars()
        .filter(|c| c.is_alphanumeric() || c.is_whitespace())
        .collect()
}

/// Replace each whitespace run with a single space and trim the ends.
fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
