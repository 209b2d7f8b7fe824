//! Heuristic NER: collect noun tokens by POS tag, rank them by lemma
//! frequency, and map lemmas to hypernym class labels through a taxonomy
//! table loaded from a TSV file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Sentence};
use crate::error::{read_to_string, Error, Result};

/// A noun token selected from a document, with its source position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NounCandidate {
    pub form: String,
    pub lemma: String,
    /// 0-based sentence position within the document.
    pub sentence_index: usize,
    /// 1-based token index within the sentence.
    pub token_index: usize,
}

/// Lowercase lemma → hypernym class label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Taxonomy {
    entries: BTreeMap<String, String>,
}

impl Taxonomy {
    pub fn new() -> Self {
        Taxonomy::default()
    }

    /// Insert one lemma → label pair. Keys are lowercased on insert.
    pub fn insert(&mut self, lemma: &str, label: &str) -> Result<()> {
        let key = lemma.trim().to_lowercase();
        if key.is_empty() {
            return Err(Error::validation("taxonomy lemma must be non-empty"));
        }
        if label.is_empty() {
            return Err(Error::validation(format!(
                "taxonomy label for `{key}` must be non-empty"
            )));
        }
        self.entries.insert(key, label.to_string());
        Ok(())
    }

    pub fn get(&self, lemma: &str) -> Option<&str> {
        self.entries.get(&lemma.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parse the two-column TSV format: `lemma<TAB>hypernym_label`, with `#`
    /// comment lines ignored.
    pub fn from_tsv_str(text: &str) -> Result<Self> {
        let mut taxonomy = Taxonomy::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lemma, label) = line.split_once('\t').ok_or_else(|| {
                Error::validation(format!(
                    "taxonomy line {}: expected `lemma<TAB>label`",
                    line_no + 1
                ))
            })?;
            taxonomy.insert(lemma, label.trim())?;
        }
        Ok(taxonomy)
    }

    pub fn from_tsv_path(path: impl AsRef<Path>) -> Result<Self> {
        Taxonomy::from_tsv_str(&read_to_string(path.as_ref())?)
    }
}

/// A lemma with its document frequency and optional hypernym class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedNoun {
    pub lemma: String,
    pub count: usize,
    pub hypernym: Option<String>,
}

/// The pseudocode's proper-noun filter.
pub fn default_pos_filter() -> BTreeSet<String> {
    BTreeSet::from(["NNP".to_string()])
}

/// The prose's "all nouns" preset.
pub fn all_nouns_pos_filter() -> BTreeSet<String> {
    ["NN", "NNS", "NNP", "NNPS"]
        .into_iter()
        .map(str::to_string)
        .collect()
}

/// Return the sentence's tokens whose fine POS tag is in `pos_filter`,
/// in token order. `sentence_index` is recorded on each candidate.
pub fn extract_nouns(
    sentence: &Sentence,
    sentence_index: usize,
    pos_filter: &BTreeSet<String>,
) -> Vec<NounCandidate> {
    sentence
        .tokens
        .iter()
        .filter(|t| pos_filter.contains(&t.xpos))
        .map(|t| NounCandidate {
            form: t.form.clone(),
            lemma: if t.lemma.is_empty() {
                t.form.clone()
            } else {
                t.lemma.clone()
            },
            sentence_index,
            token_index: t.index,
        })
        .collect()
}

/// Count lowercased noun lemmas across the document and return the top `k`,
/// ordered by descending count with lexicographic tie-break. `hypernym` is
/// left unset; see [`with_hypernyms`].
pub fn rank_nouns(doc: &Document, pos_filter: &BTreeSet<String>, k: usize) -> Vec<RankedNoun> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (sentence_index, sentence) in doc.sentences.iter().enumerate() {
        for candidate in extract_nouns(sentence, sentence_index, pos_filter) {
            *counts.entry(candidate.lemma.to_lowercase()).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<RankedNoun> = counts
        .into_iter()
        .map(|(lemma, count)| RankedNoun {
            lemma,
            count,
            hypernym: None,
        })
        .collect();
    ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.lemma.cmp(&b.lemma)));
    ranked.truncate(k);
    ranked
}

/// Lowercase taxonomy lookup; `None` models the unknown-word failure mode.
pub fn map_hypernym<'t>(lemma: &str, taxonomy: &'t Taxonomy) -> Option<&'t str> {
    taxonomy.get(lemma)
}

/// Fill the `hypernym` slot of each ranked noun from the taxonomy.
pub fn with_hypernyms(mut ranked: Vec<RankedNoun>, taxonomy: &Taxonomy) -> Vec<RankedNoun> {
    for noun in &mut ranked {
        noun.hypernym = map_hypernym(&noun.lemma, taxonomy).map(str::to_string);
    }
    ranked
}
