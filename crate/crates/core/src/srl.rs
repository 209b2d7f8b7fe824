//! Heuristic SRL: subject–predicate–object triples extracted from enhanced
//! dependency graphs by a rule cascade.
//!
//! For each predicate head (the root token first, then each additional verb
//! governing a subject or object edge, in token order):
//!
//! * subject ← target of the first edge whose relation contains the subject
//!   substring, smallest token index winning;
//! * a passive edge prefixes the predicate with `be`, a negation edge with
//!   `not` (applied after the passive prefix, so both together read
//!   `not be <verb>`);
//! * object ← target of an object edge, else an oblique edge, else absent
//!   (the oblique fallback fires only when no object edge exists at all);
//! * compound edges touching a subject or object token merge the endpoint
//!   forms in token order;
//! * conjunction structure on a subject or object inserts the literal
//!   `and`/`or` between the conjunct forms.
//!
//! Sentences without a root edge yield an empty result. Sentences without
//! enhanced edges fall back to the basic edges.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{DepEdge, Sentence};
use crate::error::{read_to_string, Error, Result};

/// The individually disableable rules of the cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SrlRule {
    Subject,
    Passive,
    Negation,
    Object,
    ObliqueFallback,
    Compound,
    Conjunction,
}

impl SrlRule {
    pub fn name(self) -> &'static str {
        match self {
            SrlRule::Subject => "subject",
            SrlRule::Passive => "passive",
            SrlRule::Negation => "negation",
            SrlRule::Object => "object",
            SrlRule::ObliqueFallback => "oblique_fallback",
            SrlRule::Compound => "compound",
            SrlRule::Conjunction => "conjunction",
        }
    }
}

impl fmt::Display for SrlRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SrlRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subject" => Ok(SrlRule::Subject),
            "passive" => Ok(SrlRule::Passive),
            "negation" => Ok(SrlRule::Negation),
            "object" => Ok(SrlRule::Object),
            "oblique_fallback" => Ok(SrlRule::ObliqueFallback),
            "compound" => Ok(SrlRule::Compound),
            "conjunction" => Ok(SrlRule::Conjunction),
            other => Err(Error::validation(format!("unknown SRL rule `{other}`"))),
        }
    }
}

/// Relation labels driving the cascade.
///
/// `subject_relation_substring` and `passive_relation` match by substring
/// containment (`nsubj:pass` contains both `subj` and `subj:pass`); the
/// remaining single-label fields match a bare label or a `label:subtype`
/// refinement (`obl` matches `obl:to` but not `iobj`). `conjunction_relations`
/// is matched exactly; `conj`-family members name the literal to insert by
/// their subtype, and `cc` lets bare `conj` edges borrow the conjunction
/// word's form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrlRuleConfig {
    pub subject_relation_substring: String,
    pub object_relation: String,
    pub oblique_relation: String,
    pub passive_relation: String,
    pub negation_relation: String,
    pub compound_relation: String,
    pub conjunction_relations: BTreeSet<String>,
    pub disabled_rules: BTreeSet<SrlRule>,
}

impl Default for SrlRuleConfig {
    fn default() -> Self {
        SrlRuleConfig {
            subject_relation_substring: "subj".to_string(),
            object_relation: "obj".to_string(),
            oblique_relation: "obl".to_string(),
            passive_relation: "subj:pass".to_string(),
            negation_relation: "neg".to_string(),
            compound_relation: "compound".to_string(),
            conjunction_relations: ["conj:and", "conj:or", "cc"]
                .into_iter()
                .map(str::to_string)
                .collect(),
            disabled_rules: BTreeSet::new(),
        }
    }
}

impl SrlRuleConfig {
    pub fn enabled(&self, rule: SrlRule) -> bool {
        !self.disabled_rules.contains(&rule)
    }

    pub fn disable(mut self, rule: SrlRule) -> Self {
        self.disabled_rules.insert(rule);
        self
    }
}

/// An extracted subject–predicate–object triple. Token indices are 1-based
/// positions in the source sentence (or frame-sample token list).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrlTriple {
    pub subject: Option<String>,
    pub predicate: String,
    pub object: Option<String>,
    pub subject_indices: Vec<usize>,
    pub predicate_index: usize,
    pub object_indices: Vec<usize>,
    /// Names of the rules that fired, in cascade order.
    pub trace: Vec<String>,
}

impl SrlTriple {
    /// A triple with neither subject nor object.
    pub fn is_degenerate(&self) -> bool {
        self.subject.is_none() && self.object.is_none()
    }
}

/// `label` matches `relation` when equal or when `relation` refines it with
/// a `:subtype` suffix.
fn label_matches(relation: &str, label: &str) -> bool {
    relation == label
        || (relation.len() > label.len()
            && relation.starts_with(label)
            && relation.as_bytes()[label.len()] == b':')
}

fn is_verb_token(upos: &str, xpos: &str) -> bool {
    upos == "VERB" || xpos.starts_with("VB")
}

/// Extract triples and report whether the basic-edge fallback was used.
pub fn extract_triples_with_info(
    sentence: &Sentence,
    cfg: &SrlRuleConfig,
) -> (Vec<SrlTriple>, bool) {
    let fallback = sentence.enhanced_edges.is_empty();
    let edges: &[DepEdge] = if fallback {
        &sentence.basic_edges
    } else {
        &sentence.enhanced_edges
    };

    let root = edges
        .iter()
        .find(|e| e.source == 0 && e.relation == "root")
        .map(|e| e.target);
    let Some(root) = root else {
        return (Vec::new(), fallback);
    };
    if sentence.token(root).is_none() {
        return (Vec::new(), fallback);
    }

    let mut predicates = vec![root];
    for token in &sentence.tokens {
        if token.index == root || !is_verb_token(&token.upos, &token.xpos) {
            continue;
        }
        let governs_argument = edges.iter().any(|e| {
            e.source == token.index
                && (e.relation.contains(&cfg.subject_relation_substring)
                    || label_matches(&e.relation, &cfg.object_relation))
        });
        if governs_argument {
            predicates.push(token.index);
        }
    }

    let triples = predicates
        .into_iter()
        .filter_map(|p| build_triple(sentence, edges, p, cfg))
        .filter(|t| !t.is_degenerate())
        .collect();
    (triples, fallback)
}

/// Extract one triple per predicate head via the rule cascade.
pub fn extract_triples(sentence: &Sentence, cfg: &SrlRuleConfig) -> Vec<SrlTriple> {
    extract_triples_with_info(sentence, cfg).0
}

fn build_triple(
    sentence: &Sentence,
    edges: &[DepEdge],
    predicate: usize,
    cfg: &SrlRuleConfig,
) -> Option<SrlTriple> {
    let predicate_token = sentence.token(predicate)?;
    let mut fired: BTreeSet<SrlRule> = BTreeSet::new();

    let subject_idx = if cfg.enabled(SrlRule::Subject) {
        edges
            .iter()
            .filter(|e| {
                e.source == predicate && e.relation.contains(&cfg.subject_relation_substring)
            })
            .map(|e| e.target)
            .min()
    } else {
        None
    };
    if subject_idx.is_some() {
        fired.insert(SrlRule::Subject);
    }

    let mut predicate_form = predicate_token.form.clone();
    if cfg.enabled(SrlRule::Passive)
        && edges
            .iter()
            .any(|e| e.source == predicate && e.relation.contains(&cfg.passive_relation))
    {
        predicate_form = format!("be {predicate_form}");
        fired.insert(SrlRule::Passive);
    }
    if cfg.enabled(SrlRule::Negation)
        && edges
            .iter()
            .any(|e| e.source == predicate && label_matches(&e.relation, &cfg.negation_relation))
    {
        predicate_form = format!("not {predicate_form}");
        fired.insert(SrlRule::Negation);
    }

    let has_object_edge = edges
        .iter()
        .any(|e| e.source == predicate && label_matches(&e.relation, &cfg.object_relation));
    let mut object_idx = None;
    if has_object_edge && cfg.enabled(SrlRule::Object) {
        object_idx = edges
            .iter()
            .filter(|e| e.source == predicate && label_matches(&e.relation, &cfg.object_relation))
            .map(|e| e.target)
            .min();
        fired.insert(SrlRule::Object);
    }
    // The oblique fallback keys on the absence of object *edges*, so
    // disabling the object rule does not promote obliques.
    if !has_object_edge && cfg.enabled(SrlRule::ObliqueFallback) {
        object_idx = edges
            .iter()
            .filter(|e| e.source == predicate && label_matches(&e.relation, &cfg.oblique_relation))
            .map(|e| e.target)
            .min();
        if object_idx.is_some() {
            fired.insert(SrlRule::ObliqueFallback);
        }
    }

    let (subject, subject_indices) = render_slot(sentence, edges, subject_idx, cfg, &mut fired);
    let (object, object_indices) = render_slot(sentence, edges, object_idx, cfg, &mut fired);

    Some(SrlTriple {
        subject,
        predicate: predicate_form,
        object,
        subject_indices,
        predicate_index: predicate,
        object_indices,
        trace: fired.into_iter().map(|r| r.name().to_string()).collect(),
    })
}

/// Resolve a slot head token into its surface string: expand conjuncts,
/// merge compounds, and join everything in token order.
fn render_slot(
    sentence: &Sentence,
    edges: &[DepEdge],
    slot: Option<usize>,
    cfg: &SrlRuleConfig,
    fired: &mut BTreeSet<SrlRule>,
) -> (Option<String>, Vec<usize>) {
    let Some(head) = slot else {
        return (None, Vec::new());
    };
    if sentence.token(head).is_none() {
        return (None, Vec::new());
    }

    // Conjunct heads in token order, each with the literal joining it to the
    // previous part.
    let mut parts: Vec<(usize, &str)> = vec![(head, "")];
    if cfg.enabled(SrlRule::Conjunction) {
        let mut conjuncts: Vec<(usize, &str)> = Vec::new();
        for edge in edges.iter().filter(|e| e.source == head) {
            if !cfg.conjunction_relations.contains(&edge.relation) {
                continue;
            }
            let literal = match edge.relation.strip_prefix("conj:") {
                Some("or") => "or",
                Some(_) => "and",
                None if edge.relation == "conj" => conjunction_word(edges, sentence, edge.target),
                None => continue, // `cc` itself marks the conjunction word, not a conjunct
            };
            if sentence.token(edge.target).is_some() {
                conjuncts.push((edge.target, literal));
            }
        }
        conjuncts.sort_by_key(|(idx, _)| *idx);
        conjuncts.dedup_by_key(|(idx, _)| *idx);
        if !conjuncts.is_empty() {
            fired.insert(SrlRule::Conjunction);
        }
        parts.extend(conjuncts);
    }

    let mut pieces: Vec<String> = Vec::new();
    let mut all_indices: Vec<usize> = Vec::new();
    for (i, (part_head, literal)) in parts.iter().enumerate() {
        if i > 0 {
            pieces.push((*literal).to_string());
        }
        let mut span = BTreeSet::from([*part_head]);
        if cfg.enabled(SrlRule::Compound) {
            for edge in edges {
                if !label_matches(&edge.relation, &cfg.compound_relation) {
                    continue;
                }
                let other = if edge.source == *part_head {
                    Some(edge.target)
                } else if edge.target == *part_head {
                    Some(edge.source)
                } else {
                    None
                };
                if let Some(other) = other {
                    if sentence.token(other).is_some() {
                        span.insert(other);
                    }
                }
            }
            if span.len() > 1 {
                fired.insert(SrlRule::Compound);
            }
        }
        for idx in span {
            pieces.push(sentence.token(idx).expect("checked above").form.clone());
            all_indices.push(idx);
        }
    }
    all_indices.sort_unstable();
    (Some(pieces.join(" ")), all_indices)
}

/// Form of the `cc` word attached to a bare `conj` target, defaulting to "and".
fn conjunction_word<'a>(edges: &[DepEdge], sentence: &'a Sentence, conjunct: usize) -> &'a str {
    edges
        .iter()
        .find(|e| e.source == conjunct && e.relation == "cc")
        .and_then(|e| sentence.token(e.target))
        .map(|t| t.form.as_str())
        .filter(|f| *f == "and" || *f == "or")
        .unwrap_or("and")
}

/// One line of the triple output file (JSON Lines).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub doc_id: String,
    pub sentence_index: usize,
    pub subject: Option<String>,
    pub predicate: String,
    pub object: Option<String>,
    pub trace: Vec<String>,
}

impl TripleRecord {
    pub fn from_triple(doc_id: &str, sentence_index: usize, triple: &SrlTriple) -> Self {
        TripleRecord {
            doc_id: doc_id.to_string(),
            sentence_index,
            subject: triple.subject.clone(),
            predicate: triple.predicate.clone(),
            object: triple.object.clone(),
            trace: triple.trace.clone(),
        }
    }
}

pub fn write_triples_jsonl(records: &[TripleRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("plain struct serializes"));
        out.push('\n');
    }
    out
}

pub fn read_triples_jsonl(text: &str) -> Result<Vec<TripleRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::Json))
        .collect()
}

pub fn read_triples_jsonl_path(path: impl AsRef<Path>) -> Result<Vec<TripleRecord>> {
    read_triples_jsonl(&read_to_string(path.as_ref())?)
}
