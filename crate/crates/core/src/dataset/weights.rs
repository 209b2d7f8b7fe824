//! Inverse-frequency class weights for external trainers: more frequent
//! labels get lower loss weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Label → positive loss weight, strictly decreasing in class count.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightMap {
    pub weights: BTreeMap<String, f64>,
}

impl WeightMap {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.weights.get(label).copied()
    }

    /// Serialize as a JSON object `{"label": weight, ...}` with sorted keys.
    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain map serializes");
        out.push('\n');
        out
    }
}

/// Compute `w(c) = N / (K * n_c)` where `N` is the total count and `K` the
/// number of labels. Every count must be at least 1.
pub fn class_weights(counts: &BTreeMap<String, usize>) -> Result<WeightMap> {
    for (label, count) in counts {
        if *count == 0 {
            return Err(Error::validation(format!(
                "label `{label}` has a zero count"
            )));
        }
    }
    let total: usize = counts.values().sum();
    let k = counts.len();
    let weights = counts
        .iter()
        .map(|(label, count)| {
            (
                label.clone(),
                total as f64 / (k as f64 * *count as f64),
            )
        })
        .collect();
    Ok(WeightMap { weights })
}
