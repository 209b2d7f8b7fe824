//! Metric formulas and confusion-assignment protocols for the NER and SRL
//! evaluation harness.

mod ner;
mod srl;

pub use ner::{
    ner_confusion, ner_metrics, read_positions_tsv, read_positions_tsv_path, write_positions_tsv,
    NerMode, NerPositionRecord, NerReport,
};
pub use srl::{
    pair_samples, read_srl_bench_jsonl, read_srl_bench_jsonl_path, srl_confusion, srl_match,
    srl_scores, PairedSample, SlotCounts, SlotMatches, SlotReport, SrlBenchTriple, SrlReport,
};

use serde::{Deserialize, Serialize};

/// TP/TN/FP/FN counters. `tn_applicable` is false when the protocol defines
/// no true negatives (the symbolic NER case), in which case `tn` stays 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn_applicable: bool,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        let p = self.precision();
        let r = self.recall();
        if p + r > 0.0 {
            2.0 * p * r / (p + r)
        } else {
            0.0
        }
    }

    /// `(tp + tn) / total`, defined only where true negatives apply.
    pub fn accuracy(&self) -> Option<f64> {
        if self.tn_applicable {
            Some(ratio(self.tp + self.tn, self.total()))
        } else {
            None
        }
    }

    /// Componentwise sum; the result's TN applies only if both sides' do.
    pub fn combine(&self, other: &ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            tp: self.tp + other.tp,
            tn: self.tn + other.tn,
            fp: self.fp + other.fp,
            fn_: self.fn_ + other.fn_,
            tn_applicable: self.tn_applicable && other.tn_applicable,
        }
    }
}

/// `numerator / denominator`, with the zero-denominator case defined as 0.
pub(crate) fn ratio(numerator: usize, denominator: usize) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}
