//! SRL scoring against keyword benchmarks.
//!
//! A slot matches when the extracted string contains the benchmark keyword
//! (case-insensitive, whitespace-normalized substring). The confusion
//! protocol is predicate-dependent: a false-positive predicate turns the
//! sample's subject and object into true negatives; otherwise a
//! false-positive subject or object turns an *undetected* predicate into a
//! true negative. The three accuracy ratios (rigid, predicate, argument) are
//! computed from the raw keyword matches.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::eval::{ratio, ConfusionCounts};
use crate::srl::TripleRecord;

/// A human-annotated benchmark triple, addressed to one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrlBenchTriple {
    pub doc_id: String,
    pub sentence_index: usize,
    pub subject_keyword: String,
    pub predicate_keyword: String,
    #[serde(default)]
    pub object_keyword: Option<String>,
}

/// Per-slot keyword-match outcome. `object` is `None` when the benchmark
/// carries no object keyword for the sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotMatches {
    pub subject: bool,
    pub predicate: bool,
    pub object: Option<bool>,
}

fn normalize(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn contains_keyword(extracted: Option<&str>, keyword: &str) -> bool {
    match extracted {
        Some(text) => normalize(text).contains(&normalize(keyword)),
        None => false,
    }
}

/// Keyword containment per slot. A missing extracted slot never matches a
/// present benchmark keyword.
pub fn srl_match(extracted: &TripleRecord, bench: &SrlBenchTriple) -> SlotMatches {
    SlotMatches {
        subject: contains_keyword(extracted.subject.as_deref(), &bench.subject_keyword),
        predicate: contains_keyword(Some(&extracted.predicate), &bench.predicate_keyword),
        object: bench
            .object_keyword
            .as_deref()
            .map(|keyword| contains_keyword(extracted.object.as_deref(), keyword)),
    }
}

/// One benchmark triple paired with the best-matching extraction from the
/// same (doc_id, sentence_index), when any exists.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    pub bench: SrlBenchTriple,
    pub extracted: Option<TripleRecord>,
    pub matches: SlotMatches,
}

/// Pair every benchmark triple with the extraction that matches it best:
/// predicate matches first, then most matched slots, then file order.
pub fn pair_samples(bench: &[SrlBenchTriple], predictions: &[TripleRecord]) -> Vec<PairedSample> {
    let mut by_sentence: HashMap<(&str, usize), Vec<&TripleRecord>> = HashMap::new();
    for record in predictions {
        by_sentence
            .entry((record.doc_id.as_str(), record.sentence_index))
            .or_default()
            .push(record);
    }
    bench
        .iter()
        .map(|b| {
            let candidates = by_sentence
                .get(&(b.doc_id.as_str(), b.sentence_index))
                .map(Vec::as_slice)
                .unwrap_or(&[]);
            let best = candidates
                .iter()
                .enumerate()
                .map(|(i, record)| {
                    let matches = srl_match(record, b);
                    (i, *record, matches)
                })
                // Predicate match first, then most matched slots; earliest
                // record wins ties.
                .max_by_key(|(i, _, matches)| {
                    (
                        matches.predicate,
                        matched_slots(matches),
                        std::cmp::Reverse(*i),
                    )
                });
            match best {
                Some((_, record, matches)) => PairedSample {
                    bench: b.clone(),
                    extracted: Some(record.clone()),
                    matches,
                },
                None => PairedSample {
                    bench: b.clone(),
                    extracted: None,
                    matches: SlotMatches {
                        subject: false,
                        predicate: false,
                        object: b.object_keyword.as_deref().map(|_| false),
                    },
                },
            }
        })
        .collect()
}

fn matched_slots(matches: &SlotMatches) -> usize {
    matches.subject as usize
        + matches.predicate as usize
        + matches.object.unwrap_or(false) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Tp,
    Tn,
    Fp,
    Fn,
    NotCounted,
}

/// Raw outcome for one slot before the predicate-dependent TN rules.
fn raw_outcome(extracted_slot: Option<&str>, matched: Option<bool>) -> Outcome {
    match (matched, extracted_slot) {
        (None, _) => Outcome::NotCounted, // benchmark carries no keyword
        (Some(true), _) => Outcome::Tp,
        (Some(false), Some(_)) => Outcome::Fp,
        (Some(false), None) => Outcome::Fn, // present in benchmark, not extracted
    }
}

/// Confusion counts per slot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotCounts {
    pub subject: ConfusionCounts,
    pub predicate: ConfusionCounts,
    pub object: ConfusionCounts,
}

/// Apply the predicate-dependent confusion protocol over paired samples.
pub fn srl_confusion(samples: &[PairedSample]) -> SlotCounts {
    let mut counts = SlotCounts::default();
    counts.subject.tn_applicable = true;
    counts.predicate.tn_applicable = true;
    counts.object.tn_applicable = true;

    // An empty slot string counts as not extracted, so third-party
    // prediction files can mark undetected slots either way.
    fn nonempty(s: Option<&str>) -> Option<&str> {
        s.filter(|t| !t.trim().is_empty())
    }

    for sample in samples {
        let (subject_slot, predicate_slot, object_slot) = match &sample.extracted {
            Some(record) => (
                nonempty(record.subject.as_deref()),
                nonempty(Some(record.predicate.as_str())),
                nonempty(record.object.as_deref()),
            ),
            None => (None, None, None),
        };
        let mut subject = raw_outcome(subject_slot, Some(sample.matches.subject));
        let mut predicate = raw_outcome(predicate_slot, Some(sample.matches.predicate));
        let mut object = raw_outcome(object_slot, sample.matches.object);

        if predicate == Outcome::Fp {
            // A wrong predicate makes the argument slots true negatives.
            subject = Outcome::Tn;
            object = Outcome::Tn;
        } else if (subject == Outcome::Fp || object == Outcome::Fp) && predicate == Outcome::Fn {
            // A wrong argument turns an undetected predicate into a TN.
            predicate = Outcome::Tn;
        }

        tally(&mut counts.subject, subject);
        tally(&mut counts.predicate, predicate);
        tally(&mut counts.object, object);
    }
    counts
}

fn tally(counts: &mut ConfusionCounts, outcome: Outcome) {
    match outcome {
        Outcome::Tp => counts.tp += 1,
        Outcome::Tn => counts.tn += 1,
        Outcome::Fp => counts.fp += 1,
        Outcome::Fn => counts.fn_ += 1,
        Outcome::NotCounted => {}
    }
}

/// Metrics for one slot (or slot family).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotReport {
    pub counts: ConfusionCounts,
    pub accuracy: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl SlotReport {
    fn from_counts(counts: ConfusionCounts) -> Self {
        SlotReport {
            counts,
            accuracy: counts.accuracy(),
            precision: counts.precision(),
            recall: counts.recall(),
            f1: counts.f1(),
        }
    }
}

/// The full SRL evaluation: rigid/predicate/argument accuracy ratios plus
/// per-slot and combined confusion metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrlReport {
    pub rigid_accuracy: f64,
    pub predicate_accuracy: f64,
    pub argument_accuracy: f64,
    pub subject: SlotReport,
    pub predicate: SlotReport,
    pub object: SlotReport,
    /// Subject and object counts combined.
    pub argument: SlotReport,
    /// All three slots combined.
    pub overall: SlotReport,
}

/// Score a paired sample set. Errors on an empty benchmark.
pub fn srl_scores(samples: &[PairedSample]) -> Result<SrlReport> {
    if samples.is_empty() {
        return Err(Error::validation("empty SRL benchmark"));
    }
    let bench_count = samples.len();
    let mut fully_correct = 0usize;
    let mut correct_predicates = 0usize;
    let mut correct_arguments = 0usize;
    let mut bench_arguments = 0usize;
    for sample in samples {
        // With no benchmark object there is nothing to miss.
        let object_ok = sample.matches.object.unwrap_or(true);
        if sample.matches.subject && sample.matches.predicate && object_ok {
            fully_correct += 1;
        }
        correct_predicates += sample.matches.predicate as usize;
        bench_arguments += 1 + sample.matches.object.is_some() as usize;
        correct_arguments +=
            sample.matches.subject as usize + sample.matches.object.unwrap_or(false) as usize;
    }

    let counts = srl_confusion(samples);
    let argument_counts = counts.subject.combine(&counts.object);
    let overall_counts = argument_counts.combine(&counts.predicate);

    Ok(SrlReport {
        rigid_accuracy: ratio(fully_correct, bench_count),
        predicate_accuracy: ratio(correct_predicates, bench_count),
        argument_accuracy: ratio(correct_arguments, bench_arguments),
        subject: SlotReport::from_counts(counts.subject),
        predicate: SlotReport::from_counts(counts.predicate),
        object: SlotReport::from_counts(counts.object),
        argument: SlotReport::from_counts(argument_counts),
        overall: SlotReport::from_counts(overall_counts),
    })
}

/// Read the benchmark file: JSON Lines of
/// `{doc_id, sentence_index, subject_keyword, predicate_keyword, object_keyword}`.
pub fn read_srl_bench_jsonl(text: &str) -> Result<Vec<SrlBenchTriple>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::Json))
        .collect()
}

pub fn read_srl_bench_jsonl_path(path: impl AsRef<Path>) -> Result<Vec<SrlBenchTriple>> {
    read_srl_bench_jsonl(&read_to_string(path.as_ref())?)
}
