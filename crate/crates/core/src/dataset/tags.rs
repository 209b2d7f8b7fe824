//! Tag schemes over token sequences: BILUO and BIO validation, the
//! BILUO→BIO conversion (L→I, U→B), BIO span decoding, and the labeled
//! dataset file format (`token<TAB>tag`, blank line between sentences).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    Biluo,
    Bio,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Biluo => "BILUO",
            Scheme::Bio => "BIO",
        }
    }

    fn valid_prefixes(self) -> &'static [char] {
        match self {
            Scheme::Biluo => &['B', 'I', 'L', 'U'],
            Scheme::Bio => &['B', 'I'],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parallel token and tag sequences under one scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSequence {
    pub tokens: Vec<String>,
    pub tags: Vec<String>,
    pub scheme: Scheme,
}

/// Split a tag into its prefix and label, if shaped `<prefix>-<label>`.
fn split_tag(tag: &str) -> Option<(char, &str)> {
    let mut chars = tag.chars();
    let prefix = chars.next()?;
    let rest = chars.as_str();
    let label = rest.strip_prefix('-')?;
    if label.is_empty() {
        return None;
    }
    Some((prefix, label))
}

fn tag_is_valid(tag: &str, scheme: Scheme) -> bool {
    if tag == "O" {
        return true;
    }
    match split_tag(tag) {
        Some((prefix, _)) => scheme.valid_prefixes().contains(&prefix),
        None => false,
    }
}

impl LabeledSequence {
    pub fn new(tokens: Vec<String>, tags: Vec<String>, scheme: Scheme) -> Result<Self> {
        let seq = LabeledSequence {
            tokens,
            tags,
            scheme,
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tokens.len() != self.tags.len() {
            return Err(Error::validation(format!(
                "{} tokens but {} tags",
                self.tokens.len(),
                self.tags.len()
            )));
        }
        for (position, tag) in self.tags.iter().enumerate() {
            if !tag_is_valid(tag, self.scheme) {
                return Err(Error::InvalidTag {
                    scheme: self.scheme.name(),
                    position,
                    tag: tag.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Convert a BILUO sequence to BIO: L→I, U→B, everything else unchanged.
pub fn biluo_to_bio(seq: &LabeledSequence) -> Result<LabeledSequence> {
    if seq.scheme != Scheme::Biluo {
        return Err(Error::validation(format!(
            "biluo_to_bio expects a BILUO sequence, got {}",
            seq.scheme
        )));
    }
    let mut tags = Vec::with_capacity(seq.tags.len());
    for (position, tag) in seq.tags.iter().enumerate() {
        if tag == "O" {
            tags.push(tag.clone());
            continue;
        }
        match split_tag(tag) {
            Some(('L', label)) => tags.push(format!("I-{label}")),
            Some(('U', label)) => tags.push(format!("B-{label}")),
            Some(('B' | 'I', _)) => tags.push(tag.clone()),
            _ => {
                return Err(Error::InvalidTag {
                    scheme: "BILUO",
                    position,
                    tag: tag.clone(),
                })
            }
        }
    }
    Ok(LabeledSequence {
        tokens: seq.tokens.clone(),
        tags,
        scheme: Scheme::Bio,
    })
}

/// A labeled token span; `start..=end` are 0-based token positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

impl EntitySpan {
    pub fn new(start: usize, end: usize, label: impl Into<String>) -> Self {
        EntitySpan {
            start,
            end,
            label: label.into(),
        }
    }
}

/// Decode a BIO sequence into sorted, non-overlapping spans.
///
/// An `I` with no live same-label span (orphan) is repaired as `B` in lenient
/// mode (`strict = false`) and rejected in strict mode.
pub fn decode_spans(seq: &LabeledSequence, strict: bool) -> Result<Vec<EntitySpan>> {
    if seq.scheme != Scheme::Bio {
        return Err(Error::validation(format!(
            "decode_spans expects a BIO sequence, got {}",
            seq.scheme
        )));
    }
    let mut spans = Vec::new();
    let mut open: Option<EntitySpan> = None;
    for (position, tag) in seq.tags.iter().enumerate() {
        if tag == "O" {
            if let Some(span) = open.take() {
                spans.push(span);
            }
            continue;
        }
        let (prefix, label) = split_tag(tag).ok_or(Error::InvalidTag {
            scheme: "BIO",
            position,
            tag: tag.clone(),
        })?;
        match prefix {
            'B' => {
                if let Some(span) = open.take() {
                    spans.push(span);
                }
                open = Some(EntitySpan::new(position, position, label));
            }
            'I' => match open.as_mut() {
                Some(span) if span.label == label => span.end = position,
                _ => {
                    if strict {
                        return Err(Error::InvalidTag {
                            scheme: "BIO",
                            position,
                            tag: tag.clone(),
                        });
                    }
                    if let Some(span) = open.take() {
                        spans.push(span);
                    }
                    open = Some(EntitySpan::new(position, position, label));
                }
            },
            _ => {
                return Err(Error::InvalidTag {
                    scheme: "BIO",
                    position,
                    tag: tag.clone(),
                })
            }
        }
    }
    if let Some(span) = open.take() {
        spans.push(span);
    }
    Ok(spans)
}

/// Read the labeled dataset format, validating tags against `scheme`.
pub fn read_labeled_tsv(text: &str, scheme: Scheme) -> Result<Vec<LabeledSequence>> {
    let mut sequences = Vec::new();
    let mut tokens = Vec::new();
    let mut tags = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            if !tokens.is_empty() {
                sequences.push(LabeledSequence::new(
                    std::mem::take(&mut tokens),
                    std::mem::take(&mut tags),
                    scheme,
                )?);
            }
            continue;
        }
        let (token, tag) = line.split_once('\t').ok_or_else(|| {
            Error::validation(format!(
                "labeled dataset line {}: expected `token<TAB>tag`",
                line_no + 1
            ))
        })?;
        tokens.push(token.to_string());
        tags.push(tag.to_string());
    }
    if !tokens.is_empty() {
        sequences.push(LabeledSequence::new(tokens, tags, scheme)?);
    }
    Ok(sequences)
}

pub fn write_labeled_tsv(sequences: &[LabeledSequence]) -> String {
    let mut out = String::new();
    for seq in sequences {
        for (token, tag) in seq.tokens.iter().zip(&seq.tags) {
            out.push_str(token);
            out.push('\t');
            out.push_str(tag);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(tags: &[&str], scheme: Scheme) -> LabeledSequence {
        LabeledSequence {
            tokens: (0..tags.len()).map(|i| format!("t{i}")).collect(),
            tags: tags.iter().map(|t| t.to_string()).collect(),
            scheme,
        }
    }

    #[test]
    fn l_becomes_i_and_u_becomes_b() {
        let converted = biluo_to_bio(&seq(&["B-X", "I-X", "L-X"], Scheme::Biluo)).unwrap();
        assert_eq!(converted.tags, ["B-X", "I-X", "I-X"]);
        let converted = biluo_to_bio(&seq(&["U-X"], Scheme::Biluo)).unwrap();
        assert_eq!(converted.tags, ["B-X"]);
        assert_eq!(converted.scheme, Scheme::Bio);
    }

    #[test]
    fn outside_tags_pass_through() {
        let converted = biluo_to_bio(&seq(&["O", "O"], Scheme::Biluo)).unwrap();
        assert_eq!(converted.tags, ["O", "O"]);
    }

    #[test]
    fn invalid_biluo_tag_names_its_position() {
        let err = biluo_to_bio(&seq(&["B-X", "Z-X"], Scheme::Biluo)).unwrap_err();
        match err {
            Error::InvalidTag { position, tag, .. } => {
                assert_eq!(position, 1);
                assert_eq!(tag, "Z-X");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn decode_simple_spans() {
        let spans = decode_spans(&seq(&["B-X", "I-X", "O", "B-Y"], Scheme::Bio), false).unwrap();
        assert_eq!(
            spans,
            vec![EntitySpan::new(0, 1, "X"), EntitySpan::new(3, 3, "Y")]
        );
    }

    #[test]
    fn all_outside_decodes_to_nothing() {
        assert!(decode_spans(&seq(&["O", "O"], Scheme::Bio), false)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn orphan_i_repaired_or_rejected() {
        let lenient = decode_spans(&seq(&["I-X"], Scheme::Bio), false).unwrap();
        assert_eq!(lenient, vec![EntitySpan::new(0, 0, "X")]);
        assert!(decode_spans(&seq(&["I-X"], Scheme::Bio), true).is_err());
    }

    #[test]
    fn label_switch_inside_span_is_an_orphan() {
        let lenient = decode_spans(&seq(&["B-X", "I-Y"], Scheme::Bio), false).unwrap();
        assert_eq!(
            lenient,
            vec![EntitySpan::new(0, 0, "X"), EntitySpan::new(1, 1, "Y")]
        );
        assert!(decode_spans(&seq(&["B-X", "I-Y"], Scheme::Bio), true).is_err());
    }

    #[test]
    fn adjacent_b_tags_split_spans() {
        let spans = decode_spans(&seq(&["B-X", "B-X"], Scheme::Bio), false).unwrap();
        assert_eq!(
            spans,
            vec![EntitySpan::new(0, 0, "X"), EntitySpan::new(1, 1, "X")]
        );
    }

    #[test]
    fn labeled_tsv_round_trip() {
        let text = "the\tO\nbasal\tB-BrainAnatomy\nganglia\tL-BrainAnatomy\n\nMRI\tU-MedicalTerm\n\n";
        let sequences = read_labeled_tsv(text, Scheme::Biluo).unwrap();
        assert_eq!(sequences.len(), 2);
        assert_eq!(write_labeled_tsv(&sequences), text);
    }

    #[test]
    fn labeled_tsv_rejects_bad_tags() {
        assert!(read_labeled_tsv("x\tQ-Thing\n", Scheme::Biluo).is_err());
    }

    /// Reference decoder for valid BILUO sequences, used as the oracle for
    /// the conversion-preserves-spans property.
    pub(crate) fn decode_biluo_directly(tags: &[String]) -> Vec<EntitySpan> {
        let mut spans = Vec::new();
        let mut start: Option<(usize, String)> = None;
        for (i, tag) in tags.iter().enumerate() {
            match split_tag(tag) {
                Some(('U', label)) => spans.push(EntitySpan::new(i, i, label)),
                Some(('B', label)) => start = Some((i, label.to_string())),
                Some(('L', label)) => {
                    if let Some((s, ref l)) = start {
                        if l == label {
                            spans.push(EntitySpan::new(s, i, label));
                        }
                    }
                    start = None;
                }
                _ => {}
            }
        }
        spans
    }

    /// Emit a valid BILUO tag sequence built from random non-overlapping spans.
    pub(crate) fn arbitrary_biluo() -> impl Strategy<Value = LabeledSequence> {
        (1usize..24)
            .prop_flat_map(|len| {
                let spans = proptest::collection::vec(
                    (0usize..len, 1usize..4, prop_oneof!["X", "Y", "Z"]),
                    0..4,
                );
                (Just(len), spans)
            })
            .prop_map(|(len, candidates)| {
                let mut tags = vec!["O".to_string(); len];
                let mut used = vec![false; len];
                for (start, span_len, label) in candidates {
                    let end = (start + span_len - 1).min(len - 1);
                    if used[start..=end].iter().any(|u| *u) {
                        continue;
                    }
                    used[start..=end].iter_mut().for_each(|u| *u = true);
                    if start == end {
                        tags[start] = format!("U-{label}");
                    } else {
                        tags[start] = format!("B-{label}");
                        for slot in tags.iter_mut().take(end).skip(start + 1) {
                            *slot = format!("I-{label}");
                        }
                        tags[end] = format!("L-{label}");
                    }
                }
                LabeledSequence {
                    tokens: (0..len).map(|i| format!("t{i}")).collect(),
                    tags,
                    scheme: Scheme::Biluo,
                }
            })
    }

    proptest! {
        #[test]
        fn conversion_preserves_spans(seq in arbitrary_biluo()) {
            let direct = {
                let mut spans = decode_biluo_directly(&seq.tags);
                spans.sort();
                spans
            };
            let via_bio = {
                let mut spans = decode_spans(&biluo_to_bio(&seq).unwrap(), true).unwrap();
                spans.sort();
                spans
            };
            prop_assert_eq!(direct, via_bio);
        }

        #[test]
        fn conversion_emits_valid_bio(seq in arbitrary_biluo()) {
            prop_assert!(biluo_to_bio(&seq).unwrap().validate().is_ok());
        }
    }
}
