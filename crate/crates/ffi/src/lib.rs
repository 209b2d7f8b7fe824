//! C ABI over the depex engine: opaque corpus handles, status codes, and
//! UTF-8 string exchange. Strings returned through out-parameters are
//! allocated by this library and must be released with [`depex_string_free`];
//! corpus handles with [`depex_corpus_free`]. On any non-OK status the
//! thread-local error message is available via [`depex_last_error_message`].

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use depex_core::corpus::{parse_conllu, serialize_conllu, Sentence};
use depex_core::dataset::{biluo_to_bio, read_labeled_tsv, write_labeled_tsv, Scheme};
use depex_core::error::Error;
use depex_core::eval::{
    ner_confusion, ner_metrics, pair_samples, read_positions_tsv, read_srl_bench_jsonl,
    srl_scores, NerMode,
};
use depex_core::ner::{default_pos_filter, extract_nouns};
use depex_core::srl::{extract_triples, SrlRuleConfig, TripleRecord};

/// Result status for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    EvalError = 5,
    InternalError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let message = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_for(error: &Error) -> DepexStatus {
    match error {
        Error::Conllu { .. } | Error::Json(_) | Error::InvalidTag { .. } => DepexStatus::ParseError,
        Error::Validation(_) => DepexStatus::InvalidArgument,
        _ => DepexStatus::InternalError,
    }
}

fn fail(error: &Error) -> DepexStatus {
    set_error(error.to_string());
    status_for(error)
}

/// Copy of the last error message on this thread, or NULL when none.
/// Free with [`depex_string_free`].
#[no_mangle]
pub extern "C" fn depex_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn depex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through a depex out-parameter
/// (or [`depex_last_error_message`]) and not yet freed. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn depex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, DepexStatus> {
    if ptr.is_null() {
        set_error(format!("{name} is NULL"));
        return Err(DepexStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(format!("{name} is not valid UTF-8"));
        DepexStatus::InvalidUtf8
    })
}

fn return_string(out: *mut *mut c_char, value: String) -> DepexStatus {
    match CString::new(value) {
        Ok(value) => {
            unsafe { *out = value.into_raw() };
            DepexStatus::Ok
        }
        Err(_) => {
            set_error("output contains an interior NUL byte");
            DepexStatus::InternalError
        }
    }
}

/// An opaque parsed corpus.
pub struct DepexCorpus {
    sentences: Vec<Sentence>,
}

/// Parse CoNLL-U text into a corpus handle.
///
/// # Safety
/// `conllu_text` must be a NUL-terminated UTF-8 string and `out_corpus` a
/// valid pointer; on `Ok` the handle must later be released with
/// [`depex_corpus_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_corpus_parse_conllu(
    conllu_text: *const c_char,
    out_corpus: *mut *mut DepexCorpus,
) -> DepexStatus {
    if out_corpus.is_null() {
        set_error("out_corpus is NULL");
        return DepexStatus::NullPointer;
    }
    let text = match utf8_arg(conllu_text, "conllu_text") {
        Ok(text) => text,
        Err(status) => return status,
    };
    match parse_conllu(text) {
        Ok(parsed) => {
            let handle = Box::new(DepexCorpus {
                sentences: parsed.sentences,
            });
            *out_corpus = Box::into_raw(handle);
            DepexStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Release a corpus handle. NULL is a no-op.
///
/// # Safety
/// `corpus` must come from [`depex_corpus_parse_conllu`] and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn depex_corpus_free(corpus: *mut DepexCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Number of sentences in the corpus (0 for NULL).
///
/// # Safety
/// `corpus` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn depex_corpus_sentence_count(corpus: *const DepexCorpus) -> u64 {
    corpus.as_ref().map_or(0, |c| c.sentences.len() as u64)
}

/// Number of tokens in the corpus (0 for NULL).
///
/// # Safety
/// `corpus` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn depex_corpus_token_count(corpus: *const DepexCorpus) -> u64 {
    corpus.as_ref().map_or(0, |c| {
        c.sentences.iter().map(|s| s.tokens.len() as u64).sum()
    })
}

/// Serialize the corpus back to CoNLL-U into `out_text`.
///
/// # Safety
/// `corpus` must be a live handle; `out_text` a valid pointer. Free the
/// result with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_corpus_to_conllu(
    corpus: *const DepexCorpus,
    out_text: *mut *mut c_char,
) -> DepexStatus {
    let Some(corpus) = corpus.as_ref() else {
        set_error("corpus is NULL");
        return DepexStatus::NullPointer;
    };
    if out_text.is_null() {
        set_error("out_text is NULL");
        return DepexStatus::NullPointer;
    }
    return_string(out_text, serialize_conllu(&corpus.sentences))
}

/// Run the heuristic SRL cascade with default rules over the corpus and
/// return the triples as JSON Lines.
///
/// # Safety
/// `corpus` must be a live handle; `doc_id` NUL-terminated UTF-8; `out_jsonl`
/// valid. Free the result with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_corpus_triples_jsonl(
    corpus: *const DepexCorpus,
    doc_id: *const c_char,
    out_jsonl: *mut *mut c_char,
) -> DepexStatus {
    let Some(corpus) = corpus.as_ref() else {
        set_error("corpus is NULL");
        return DepexStatus::NullPointer;
    };
    if out_jsonl.is_null() {
        set_error("out_jsonl is NULL");
        return DepexStatus::NullPointer;
    }
    let doc_id = match utf8_arg(doc_id, "doc_id") {
        Ok(doc_id) => doc_id,
        Err(status) => return status,
    };
    let cfg = SrlRuleConfig::default();
    let mut records = Vec::new();
    for (sentence_index, sentence) in corpus.sentences.iter().enumerate() {
        for triple in extract_triples(sentence, &cfg) {
            records.push(TripleRecord::from_triple(doc_id, sentence_index, &triple));
        }
    }
    return_string(out_jsonl, depex_core::srl::write_triples_jsonl(&records))
}

/// Extract noun tokens (optionally restricted to a comma-separated xpos
/// filter; NULL means the proper-noun default) as a prediction TSV of
/// `doc_id<TAB>position<TAB>token` rows with document-global positions.
///
/// # Safety
/// `corpus` must be a live handle; `doc_id` NUL-terminated UTF-8;
/// `pos_filter_csv` NUL-terminated UTF-8 or NULL; `out_tsv` valid. Free the
/// result with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_corpus_noun_positions_tsv(
    corpus: *const DepexCorpus,
    doc_id: *const c_char,
    pos_filter_csv: *const c_char,
    out_tsv: *mut *mut c_char,
) -> DepexStatus {
    let Some(corpus) = corpus.as_ref() else {
        set_error("corpus is NULL");
        return DepexStatus::NullPointer;
    };
    if out_tsv.is_null() {
        set_error("out_tsv is NULL");
        return DepexStatus::NullPointer;
    }
    let doc_id = match utf8_arg(doc_id, "doc_id") {
        Ok(doc_id) => doc_id,
        Err(status) => return status,
    };
    let filter: BTreeSet<String> = if pos_filter_csv.is_null() {
        default_pos_filter()
    } else {
        match utf8_arg(pos_filter_csv, "pos_filter_csv") {
            Ok(csv) => csv
                .split(',')
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect(),
            Err(status) => return status,
        }
    };
    let mut out = String::new();
    let mut offset = 0usize;
    for (sentence_index, sentence) in corpus.sentences.iter().enumerate() {
        for candidate in extract_nouns(sentence, sentence_index, &filter) {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                doc_id,
                offset + candidate.token_index - 1,
                candidate.form
            ));
        }
        offset += sentence.tokens.len();
    }
    return_string(out_tsv, out)
}

/// Convert a BILUO labeled dataset (TSV text) to BIO.
///
/// # Safety
/// `labeled_tsv` must be NUL-terminated UTF-8 and `out_tsv` valid. Free the
/// result with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_biluo_to_bio(
    labeled_tsv: *const c_char,
    out_tsv: *mut *mut c_char,
) -> DepexStatus {
    if out_tsv.is_null() {
        set_error("out_tsv is NULL");
        return DepexStatus::NullPointer;
    }
    let text = match utf8_arg(labeled_tsv, "labeled_tsv") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let sequences = match read_labeled_tsv(text, Scheme::Biluo) {
        Ok(sequences) => sequences,
        Err(err) => return fail(&err),
    };
    let mut converted = Vec::with_capacity(sequences.len());
    for seq in &sequences {
        match biluo_to_bio(seq) {
            Ok(bio) => converted.push(bio),
            Err(err) => return fail(&err),
        }
    }
    return_string(out_tsv, write_labeled_tsv(&converted))
}

/// Score NER predictions against a benchmark (both in the position-TSV
/// format) and return the metrics as a JSON object. `data_driven` enables
/// true negatives and accuracy; `total_tokens` is the token count of the
/// evaluated corpus (ignored in symbolic mode when 0).
///
/// # Safety
/// String arguments must be NUL-terminated UTF-8; `out_json` valid. Free the
/// result with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_eval_ner(
    benchmark_tsv: *const c_char,
    predictions_tsv: *const c_char,
    total_tokens: u64,
    data_driven: bool,
    out_json: *mut *mut c_char,
) -> DepexStatus {
    if out_json.is_null() {
        set_error("out_json is NULL");
        return DepexStatus::NullPointer;
    }
    let benchmark = match utf8_arg(benchmark_tsv, "benchmark_tsv") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let predictions = match utf8_arg(predictions_tsv, "predictions_tsv") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let run = || -> Result<String, Error> {
        let bench_records = read_positions_tsv(benchmark)?;
        let pred_records = read_positions_tsv(predictions)?;
        let bench: BTreeSet<usize> = bench_records.iter().map(|r| r.position).collect();
        let predicted: BTreeSet<usize> = pred_records.iter().map(|r| r.position).collect();
        let max_seen = bench
            .iter()
            .chain(predicted.iter())
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        let (mode, total) = if data_driven {
            (NerMode::DataDriven, total_tokens as usize)
        } else {
            (NerMode::Symbolic, max_seen.max(total_tokens as usize))
        };
        let counts = ner_confusion(&predicted, &bench, total, mode)?;
        let metrics = ner_metrics(&counts);
        let mut json = serde_json::to_string_pretty(&serde_json::json!({
            "counts": counts,
            "metrics": metrics,
        }))?;
        json.push('\n');
        Ok(json)
    };
    match run() {
        Ok(json) => return_string(out_json, json),
        Err(err) => {
            set_error(err.to_string());
            DepexStatus::EvalError
        }
    }
}

/// Score SRL predictions (triple JSON Lines) against a keyword benchmark
/// (JSON Lines) and return the full report as JSON.
///
/// # Safety
/// String arguments must be NUL-terminated UTF-8; `out_json` valid. Free the
/// result with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_eval_srl(
    benchmark_jsonl: *const c_char,
    predictions_jsonl: *const c_char,
    out_json: *mut *mut c_char,
) -> DepexStatus {
    if out_json.is_null() {
        set_error("out_json is NULL");
        return DepexStatus::NullPointer;
    }
    let benchmark = match utf8_arg(benchmark_jsonl, "benchmark_jsonl") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let predictions = match utf8_arg(predictions_jsonl, "predictions_jsonl") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let run = || -> Result<String, Error> {
        let bench = read_srl_bench_jsonl(benchmark)?;
        let records = depex_core::srl::read_triples_jsonl(predictions)?;
        let samples = pair_samples(&bench, &records);
        let report = srl_scores(&samples)?;
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        Ok(json)
    };
    match run() {
        Ok(json) => return_string(out_json, json),
        Err(err) => {
            set_error(err.to_string());
            DepexStatus::EvalError
        }
    }
}

/// Clean raw text: strip HTML tags and special characters, collapse
/// whitespace, lowercase; each step individually toggleable, applied in
/// that fixed order.
///
/// # Safety
/// `text` must be NUL-terminated UTF-8 and `out_text` valid. Free the result
/// with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_preprocess(
    text: *const c_char,
    strip_html_tags: bool,
    strip_special_chars: bool,
    collapse_whitespace: bool,
    lowercase: bool,
    out_text: *mut *mut c_char,
) -> DepexStatus {
    if out_text.is_null() {
        set_error("out_text is NULL");
        return DepexStatus::NullPointer;
    }
    let text = match utf8_arg(text, "text") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let config = depex_core::corpus::PreprocessConfig {
        strip_html_tags,
        strip_special_chars,
        collapse_whitespace,
        lowercase,
    };
    return_string(
        out_text,
        depex_core::corpus::preprocess_text(text, &config),
    )
}

/// Inverse-frequency class weights from a JSON object of label→count;
/// returns a JSON object of label→weight.
///
/// # Safety
/// `counts_json` must be NUL-terminated UTF-8 and `out_json` valid. Free the
/// result with [`depex_string_free`].
#[no_mangle]
pub unsafe extern "C" fn depex_class_weights(
    counts_json: *const c_char,
    out_json: *mut *mut c_char,
) -> DepexStatus {
    if out_json.is_null() {
        set_error("out_json is NULL");
        return DepexStatus::NullPointer;
    }
    let text = match utf8_arg(counts_json, "counts_json") {
        Ok(text) => text,
        Err(status) => return status,
    };
    let run = || -> Result<String, Error> {
        let counts: BTreeMap<String, usize> = serde_json::from_str(text)?;
        Ok(depex_core::dataset::class_weights(&counts)?.to_json_string())
    };
    match run() {
        Ok(json) => return_string(out_json, json),
        Err(err) => fail(&err),
    }
}
