//! SRL frame handling: broadcast one sentence into per-predicate training
//! samples, filter tags down to the seven-label set, and decode a frame
//! sample back into a subject–predicate–object triple (ARG0 → subject,
//! B-V → predicate, ARG1 → object with ARG2 as the substitute).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};
use crate::srl::SrlTriple;

/// The tag vocabulary kept for the SRL task; everything else maps to `O`.
pub const SRL_FRAME_TAGS: [&str; 7] = [
    "B-ARG0", "I-ARG0", "B-ARG1", "I-ARG1", "B-ARG2", "I-ARG2", "B-V",
];

/// One predicate's annotation over a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameAnnotation {
    pub verb: String,
    pub frames: Vec<String>,
}

/// A sentence paired with the frame annotations of all its predicates;
/// the input record shape for broadcasting (JSON Lines).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceFrames {
    pub tokens: Vec<String>,
    pub srl_frames: Vec<FrameAnnotation>,
}

/// One broadcast training sample: a full token copy plus one predicate's
/// filtered tags. Exactly one `B-V` per sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSample {
    pub tokens: Vec<String>,
    pub verb: String,
    pub frames: Vec<String>,
}

impl FrameSample {
    pub fn validate(&self) -> Result<()> {
        if self.tokens.len() != self.frames.len() {
            return Err(Error::validation(format!(
                "{} tokens but {} frame tags",
                self.tokens.len(),
                self.frames.len()
            )));
        }
        let verbs = self.frames.iter().filter(|t| *t == "B-V").count();
        if verbs != 1 {
            return Err(Error::validation(format!(
                "expected exactly one B-V tag, found {verbs}"
            )));
        }
        Ok(())
    }
}

/// Replicate `tokens` once per annotation, mapping tags outside
/// [`SRL_FRAME_TAGS`] to `O`.
pub fn broadcast_frames(
    tokens: &[String],
    annotations: &[FrameAnnotation],
) -> Result<Vec<FrameSample>> {
    let mut samples = Vec::with_capacity(annotations.len());
    for (i, annotation) in annotations.iter().enumerate() {
        if annotation.frames.len() != tokens.len() {
            return Err(Error::validation(format!(
                "annotation {} (`{}`): {} tags for {} tokens",
                i,
                annotation.verb,
                annotation.frames.len(),
                tokens.len()
            )));
        }
        let frames: Vec<String> = annotation
            .frames
            .iter()
            .map(|tag| {
                if SRL_FRAME_TAGS.contains(&tag.as_str()) {
                    tag.clone()
                } else {
                    "O".to_string()
                }
            })
            .collect();
        let sample = FrameSample {
            tokens: tokens.to_vec(),
            verb: annotation.verb.clone(),
            frames,
        };
        sample.validate()?;
        samples.push(sample);
    }
    Ok(samples)
}

/// First maximal span of the given role, as 1-based token indices.
/// An `I-` tag with no preceding same-role tag opens a span (lenient).
fn role_span(frames: &[String], role: &str) -> Vec<usize> {
    let begin = format!("B-{role}");
    let inside = format!("I-{role}");
    let mut span = Vec::new();
    for (i, tag) in frames.iter().enumerate() {
        if *tag == begin {
            if span.is_empty() {
                span.push(i + 1);
            } else {
                break; // a second span of the same role; keep the first
            }
        } else if *tag == inside {
            if span.is_empty() || *span.last().unwrap() == i {
                span.push(i + 1);
            } else {
                break;
            }
        } else if !span.is_empty() {
            break;
        }
    }
    span
}

fn span_text(tokens: &[String], span: &[usize]) -> Option<String> {
    if span.is_empty() {
        None
    } else {
        Some(
            span.iter()
                .map(|&i| tokens[i - 1].as_str())
                .collect::<Vec<_>>()
                .join(" "),
        )
    }
}

/// Decode a frame sample into a triple: subject from ARG0, predicate from
/// the `B-V` token, object from ARG1 or, failing that, ARG2.
pub fn frames_to_triple(sample: &FrameSample) -> Result<SrlTriple> {
    if sample.tokens.len() != sample.frames.len() {
        return Err(Error::validation(format!(
            "{} tokens but {} frame tags",
            sample.tokens.len(),
            sample.frames.len()
        )));
    }
    let verb_position = sample
        .frames
        .iter()
        .position(|t| t == "B-V")
        .ok_or_else(|| Error::validation("frame sample has no B-V tag"))?;

    let mut trace = Vec::new();
    let subject_span = role_span(&sample.frames, "ARG0");
    let subject = span_text(&sample.tokens, &subject_span);
    if subject.is_some() {
        trace.push("frame_arg0".to_string());
    }
    trace.push("frame_v".to_string());

    let arg1_span = role_span(&sample.frames, "ARG1");
    let (object, object_indices) = if !arg1_span.is_empty() {
        trace.push("frame_arg1".to_string());
        (span_text(&sample.tokens, &arg1_span), arg1_span)
    } else {
        let arg2_span = role_span(&sample.frames, "ARG2");
        if !arg2_span.is_empty() {
            trace.push("frame_arg2_substitution".to_string());
        }
        (span_text(&sample.tokens, &arg2_span), arg2_span)
    };

    Ok(SrlTriple {
        subject,
        predicate: sample.tokens[verb_position].clone(),
        object,
        subject_indices: subject_span,
        predicate_index: verb_position + 1,
        object_indices,
        trace,
    })
}

pub fn write_frame_samples_jsonl(samples: &[FrameSample]) -> String {
    let mut out = String::new();
    for sample in samples {
        out.push_str(&serde_json::to_string(sample).expect("plain struct serializes"));
        out.push('\n');
    }
    out
}

pub fn read_frame_samples_jsonl(text: &str) -> Result<Vec<FrameSample>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::Json))
        .collect()
}

pub fn read_sentence_frames_jsonl(path: impl AsRef<Path>) -> Result<Vec<SentenceFrames>> {
    read_to_string(path.as_ref())?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::Json))
        .collect()
}

/// The worked example from the source data: a 13-token sentence with two
/// annotated predicates. Used by tests.
#[cfg(test)]
pub(crate) fn example_sentence_frames() -> SentenceFrames {
    let tokens: Vec<String> =
        "We respectfully invite you to watch a special edition of Across China ."
            .split(' ')
            .map(str::to_string)
            .collect();
    let invite = FrameAnnotation {
        verb: "invite".to_string(),
        frames: [
            "B-ARG0", "B-ARGM-MNR", "B-V", "B-ARG1", "B-ARG2", "I-ARG2", "I-ARG2", "I-ARG2",
            "I-ARG2", "I-ARG2", "I-ARG2", "I-ARG2", "O",
        ]
        .into_iter()
        .map(str::to_string)
        .collect(),
    };
    let watch = FrameAnnotation {
        verb: "watch".to_string(),
        frames: [
            "O", "O", "O", "B-ARG0", "O", "B-V", "B-ARG1", "I-ARG1", "I-ARG1", "I-ARG1", "I-ARG1",
            "I-ARG1", "O",
        ]
        .into_iter()
        .map(str::to_string)
        .collect(),
    };
    SentenceFrames {
        tokens,
        srl_frames: vec![invite, watch],
    }
}
