//! NER scoring: token-position confusion counts and the derived accuracy,
//! precision, recall, and F1 metrics.
//!
//! Comparison is by token position, not surface string, so repeated forms
//! never double-count. In `Symbolic` mode the extractor only proposes nouns,
//! so no token can be a true negative and accuracy is not applicable; in
//! `DataDriven` mode the remaining tokens are true negatives and the four
//! counts partition the document.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::eval::ConfusionCounts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NerMode {
    Symbolic,
    DataDriven,
}

impl std::str::FromStr for NerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(NerMode::Symbolic),
            "data-driven" | "data_driven" => Ok(NerMode::DataDriven),
            other => Err(Error::validation(format!(
                "unknown NER mode `{other}` (expected symbolic|data-driven)"
            ))),
        }
    }
}

/// Count the confusion cells from predicted and benchmark token-position
/// sets. Every position must be `< total_tokens`.
pub fn ner_confusion(
    predicted: &BTreeSet<usize>,
    benchmark: &BTreeSet<usize>,
    total_tokens: usize,
    mode: NerMode,
) -> Result<ConfusionCounts> {
    for &position in predicted.iter().chain(benchmark.iter()) {
        if position >= total_tokens {
            return Err(Error::validation(format!(
                "token position {position} out of range for {total_tokens} tokens"
            )));
        }
    }
    let tp = predicted.intersection(benchmark).count();
    let fp = predicted.difference(benchmark).count();
    let fn_ = benchmark.difference(predicted).count();
    let (tn, tn_applicable) = match mode {
        NerMode::DataDriven => (total_tokens - tp - fp - fn_, true),
        NerMode::Symbolic => (0, false),
    };
    Ok(ConfusionCounts {
        tp,
        tn,
        fp,
        fn_,
        tn_applicable,
    })
}

/// Accuracy (where applicable), precision, recall, and F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NerReport {
    pub accuracy: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn ner_metrics(counts: &ConfusionCounts) -> NerReport {
    NerReport {
        accuracy: counts.accuracy(),
        precision: counts.precision(),
        recall: counts.recall(),
        f1: counts.f1(),
    }
}

/// One row of a benchmark or prediction file:
/// `doc_id<TAB>token_position<TAB>token`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerPositionRecord {
    pub doc_id: String,
    pub position: usize,
    pub token: String,
}

pub fn read_positions_tsv(text: &str) -> Result<Vec<NerPositionRecord>> {
    let mut records = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.splitn(3, '\t');
        let (Some(doc_id), Some(position), Some(token)) =
            (cols.next(), cols.next(), cols.next())
        else {
            return Err(Error::validation(format!(
                "positions line {}: expected `doc_id<TAB>position<TAB>token`",
                line_no + 1
            )));
        };
        let position: usize = position.parse().map_err(|_| {
            Error::validation(format!(
                "positions line {}: non-integer position `{position}`",
                line_no + 1
            ))
        })?;
        records.push(NerPositionRecord {
            doc_id: doc_id.to_string(),
            position,
            token: token.to_string(),
        });
    }
    Ok(records)
}

pub fn write_positions_tsv(records: &[NerPositionRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            record.doc_id, record.position, record.token
        ));
    }
    out
}

pub fn read_positions_tsv_path(path: impl AsRef<Path>) -> Result<Vec<NerPositionRecord>> {
    read_positions_tsv(&read_to_string(path.as_ref())?)
}
