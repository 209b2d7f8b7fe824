//! Phrase-dictionary annotation: leftmost-longest case-insensitive matching
//! over token sequences, emitting BILUO tags.

use std::collections::HashMap;
use std::path::Path;

use crate::dataset::tags::{LabeledSequence, Scheme};
use crate::error::{read_to_string, Error, Result};

/// A dictionary phrase (lowercase tokens) with its entity label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GazetteerEntry {
    pub phrase: Vec<String>,
    pub label: String,
}

/// A phrase dictionary indexed by first token for matching.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: Vec<GazetteerEntry>,
    by_first: HashMap<String, Vec<usize>>,
}

impl Gazetteer {
    pub fn new(entries: Vec<GazetteerEntry>) -> Result<Self> {
        let mut gazetteer = Gazetteer::default();
        for entry in entries {
            gazetteer.push(entry)?;
        }
        Ok(gazetteer)
    }

    fn push(&mut self, mut entry: GazetteerEntry) -> Result<()> {
        if entry.phrase.is_empty() {
            return Err(Error::validation("gazetteer phrase must be non-empty"));
        }
        if entry.label.is_empty() {
            return Err(Error::validation("gazetteer label must be non-empty"));
        }
        for token in &mut entry.phrase {
            *token = token.to_lowercase();
            if token.is_empty() {
                return Err(Error::validation("gazetteer phrase token must be non-empty"));
            }
        }
        let index = self.entries.len();
        self.by_first
            .entry(entry.phrase[0].clone())
            .or_default()
            .push(index);
        self.entries.push(entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parse the TSV format `phrase<TAB>label` (phrase space-separated,
    /// lowercase; abbreviations are separate rows); `#` comments ignored.
    pub fn from_tsv_str(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (phrase, label) = line.split_once('\t').ok_or_else(|| {
                Error::validation(format!(
                    "gazetteer line {}: expected `phrase<TAB>label`",
                    line_no + 1
                ))
            })?;
            entries.push(GazetteerEntry {
                phrase: phrase.split_whitespace().map(str::to_string).collect(),
                label: label.trim().to_string(),
            });
        }
        Gazetteer::new(entries)
    }

    pub fn from_tsv_path(path: impl AsRef<Path>) -> Result<Self> {
        Gazetteer::from_tsv_str(&read_to_string(path.as_ref())?)
    }

    /// Longest entry whose phrase matches `lowered[at..]`, ties going to the
    /// earliest entry.
    fn longest_match(&self, lowered: &[String], at: usize) -> Option<&GazetteerEntry> {
        let candidates = self.by_first.get(&lowered[at])?;
        let mut best: Option<&GazetteerEntry> = None;
        for &index in candidates {
            let entry = &self.entries[index];
            let end = at + entry.phrase.len();
            if end > lowered.len() {
                continue;
            }
            if entry.phrase[..] == lowered[at..end]
                && best.is_none_or(|b| entry.phrase.len() > b.phrase.len())
            {
                best = Some(entry);
            }
        }
        best
    }
}

/// Tag tokens against the gazetteer with leftmost-longest case-insensitive
/// matching. Single-token matches become `U-label`, multi-token matches
/// `B..I..L`, everything else `O`.
pub fn gazetteer_tag<S: AsRef<str>>(tokens: &[S], gazetteer: &Gazetteer) -> LabeledSequence {
    let lowered: Vec<String> = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
    let mut tags = vec!["O".to_string(); tokens.len()];
    let mut at = 0usize;
    while at < tokens.len() {
        match gazetteer.longest_match(&lowered, at) {
            Some(entry) => {
                let len = entry.phrase.len();
                if len == 1 {
                    tags[at] = format!("U-{}", entry.label);
                } else {
                    tags[at] = format!("B-{}", entry.label);
                    for tag in tags.iter_mut().take(at + len - 1).skip(at + 1) {
                        *tag = format!("I-{}", entry.label);
                    }
                    tags[at + len - 1] = format!("L-{}", entry.label);
                }
                at += len;
            }
            None => at += 1,
        }
    }
    LabeledSequence {
        tokens: tokens.iter().map(|t| t.as_ref().to_string()).collect(),
        tags,
        scheme: Scheme::Biluo,
    }
}
