//! Corpus substrate: tokens, dependency edges, sentences, documents and
//! their statistics, plus text preprocessing and CoNLL-U interchange.

mod conllu;
mod preprocess;

pub use conllu::{parse_conllu, serialize_conllu, ConlluParse};
pub use preprocess::{preprocess_text, PreprocessConfig};

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A syntactic word. `index` is 1-based within its sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    /// Coarse (universal) POS tag, e.g. "NOUN".
    pub upos: String,
    /// Fine POS tag, e.g. "NNP".
    pub xpos: String,
}

/// A directed dependency edge. `source` 0 denotes the virtual root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepEdge {
    pub source: usize,
    pub target: usize,
    pub relation: String,
}

impl DepEdge {
    pub fn new(source: usize, target: usize, relation: impl Into<String>) -> Self {
        DepEdge {
            source,
            target,
            relation: relation.into(),
        }
    }
}

/// One parsed sentence: tokens plus basic and enhanced dependency graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub basic_edges: Vec<DepEdge>,
    pub enhanced_edges: Vec<DepEdge>,
    /// Original surface string, when known.
    pub text: String,
}

impl Sentence {
    /// Look up a token by its 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        if index >= 1 {
            self.tokens.get(index - 1)
        } else {
            None
        }
    }

    /// Check the structural invariants: consecutive 1-based token indices,
    /// non-empty forms, edges referring to existing tokens, and at most one
    /// basic root edge.
    pub fn validate(&self) -> Result<()> {
        for (pos, token) in self.tokens.iter().enumerate() {
            if token.index != pos + 1 {
                return Err(Error::validation(format!(
                    "token index {} at position {} is not consecutive",
                    token.index,
                    pos + 1
                )));
            }
            if token.form.is_empty() {
                return Err(Error::validation(format!(
                    "token {} has an empty form",
                    token.index
                )));
            }
        }
        let n = self.tokens.len();
        let mut roots = 0usize;
        for edge in self.basic_edges.iter().chain(self.enhanced_edges.iter()) {
            if edge.target < 1 || edge.target > n {
                return Err(Error::validation(format!(
                    "edge target {} out of range 1..={}",
                    edge.target, n
                )));
            }
            if edge.source > n {
                return Err(Error::validation(format!(
                    "edge source {} out of range 0..={}",
                    edge.source, n
                )));
            }
            if edge.relation.is_empty() {
                return Err(Error::validation("edge with empty relation".to_string()));
            }
        }
        for edge in &self.basic_edges {
            if edge.relation == "root" {
                roots += 1;
            }
        }
        if roots > 1 {
            return Err(Error::validation(format!(
                "{roots} basic root edges in one sentence"
            )));
        }
        Ok(())
    }
}

/// Document genre, always set explicitly by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Genre {
    Generic,
    Domain,
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genre::Generic => write!(f, "generic"),
            Genre::Domain => write!(f, "domain"),
        }
    }
}

impl FromStr for Genre {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Genre::Generic),
            "domain" => Ok(Genre::Domain),
            other => Err(Error::validation(format!(
                "unknown genre `{other}` (expected generic|domain)"
            ))),
        }
    }
}

/// Document length class, always set explicitly by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthClass {
    Short,
    Long,
}

impl fmt::Display for LengthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthClass::Short => write!(f, "short"),
            LengthClass::Long => write!(f, "long"),
        }
    }
}

impl FromStr for LengthClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "short" => Ok(LengthClass::Short),
            "long" => Ok(LengthClass::Long),
            other => Err(Error::validation(format!(
                "unknown length class `{other}` (expected short|long)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub genre: Genre,
    pub length_class: LengthClass,
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        genre: Genre,
        length_class: LengthClass,
        sentences: Vec<Sentence>,
    ) -> Self {
        Document {
            id: id.into(),
            genre,
            length_class,
            sentences,
        }
    }
}

/// Sentence and token totals for one document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentStats {
    pub total_sentences: usize,
    pub total_tokens: usize,
}

impl Add for DocumentStats {
    type Output = DocumentStats;

    fn add(self, rhs: DocumentStats) -> DocumentStats {
        DocumentStats {
            total_sentences: self.total_sentences + rhs.total_sentences,
            total_tokens: self.total_tokens + rhs.total_tokens,
        }
    }
}

pub fn compute_stats(doc: &Document) -> DocumentStats {
    DocumentStats {
        total_sentences: doc.sentences.len(),
        total_tokens: doc.sentences.iter().map(|s| s.tokens.len()).sum(),
    }
}
