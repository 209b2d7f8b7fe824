//! Batch helpers shared by the CLI: document loading, per-document
//! parallelism, and the extraction passes that feed prediction files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::corpus::{parse_conllu, Document, Genre, LengthClass, Sentence};
use crate::error::{read_to_string, Error, Result};
use crate::eval::NerPositionRecord;
use crate::ner::{extract_nouns, NounCandidate};
use crate::parser_client::{ParseRequest, ParserClient};
use crate::srl::{extract_triples_with_info, SrlRuleConfig, TripleRecord};

/// Where parsed sentences come from.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub genre: Option<Genre>,
    pub length_class: Option<LengthClass>,
    /// Parse server endpoint for raw-text inputs.
    pub endpoint: Option<String>,
    /// Cache directory for parse responses (see `DEPEX_CACHE_DIR`).
    pub cache_dir: Option<PathBuf>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            genre: None,
            length_class: None,
            endpoint: None,
            cache_dir: std::env::var_os("DEPEX_CACHE_DIR").map(PathBuf::from),
        }
    }
}

fn doc_id_for(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned())
}

fn document_from(id: String, sentences: Vec<Sentence>, options: &LoadOptions) -> Document {
    Document {
        id,
        genre: options.genre.unwrap_or(Genre::Generic),
        length_class: options.length_class.unwrap_or(LengthClass::Short),
        sentences,
    }
}

/// Load documents from a path: a `.conllu` file, a directory of `.conllu`
/// files (sorted by name), or a raw-text file parsed via the endpoint.
pub fn load_documents(input: &Path, options: &LoadOptions) -> Result<Vec<Document>> {
    if input.is_dir() {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(input)
            .map_err(|e| Error::io(input, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "conllu"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Error::validation(format!(
                "no .conllu files in {}",
                input.display()
            )));
        }
        return paths
            .iter()
            .map(|path| load_conllu_document(path, options))
            .collect();
    }
    match input.extension().and_then(|e| e.to_str()) {
        Some("conllu") => Ok(vec![load_conllu_document(input, options)?]),
        _ => Ok(vec![load_text_document(input, options)?]),
    }
}

fn load_conllu_document(path: &Path, options: &LoadOptions) -> Result<Document> {
    let parsed = parse_conllu(&read_to_string(path)?)?;
    if parsed.skipped_tokens > 0 {
        eprintln!(
            "warning: {}: skipped {} multiword-range/empty-node entries",
            path.display(),
            parsed.skipped_tokens
        );
    }
    Ok(document_from(doc_id_for(path), parsed.sentences, options))
}

fn load_text_document(path: &Path, options: &LoadOptions) -> Result<Document> {
    let endpoint = options.endpoint.as_deref().ok_or_else(|| {
        Error::validation(format!(
            "{} is not a .conllu file; raw text needs --endpoint",
            path.display()
        ))
    })?;
    let text = read_to_string(path)?;
    if text.trim().is_empty() {
        return Err(Error::validation(format!(
            "{} is empty",
            path.display()
        )));
    }
    let mut client = ParserClient::new();
    if let Some(dir) = &options.cache_dir {
        client = client.with_cache_dir(dir);
    }
    let response = client.parse_remote(&ParseRequest::new(text, endpoint))?;
    Ok(document_from(doc_id_for(path), response.sentences, options))
}

/// Run `f` over the documents inside a rayon pool of `jobs` threads,
/// preserving input order in the output.
pub fn run_per_document<T, F>(documents: &[Document], jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Document) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::validation(format!("thread pool: {e}")))?;
    Ok(pool.install(|| documents.par_iter().map(f).collect()))
}

/// Noun extraction for one document, as document-global position records
/// (position = cumulative 0-based token offset) plus the candidates.
pub fn ner_pass(
    doc: &Document,
    pos_filter: &std::collections::BTreeSet<String>,
) -> (Vec<NerPositionRecord>, Vec<NounCandidate>) {
    let mut records = Vec::new();
    let mut candidates = Vec::new();
    let mut offset = 0usize;
    for (sentence_index, sentence) in doc.sentences.iter().enumerate() {
        for candidate in extract_nouns(sentence, sentence_index, pos_filter) {
            records.push(NerPositionRecord {
                doc_id: doc.id.clone(),
                position: offset + candidate.token_index - 1,
                token: candidate.form.clone(),
            });
            candidates.push(candidate);
        }
        offset += sentence.tokens.len();
    }
    (records, candidates)
}

/// Triple extraction for one document. Returns the records plus the number
/// of sentences that fell back to basic edges.
pub fn srl_pass(doc: &Document, cfg: &SrlRuleConfig) -> (Vec<TripleRecord>, usize) {
    let mut records = Vec::new();
    let mut fallbacks = 0usize;
    for (sentence_index, sentence) in doc.sentences.iter().enumerate() {
        let (triples, used_fallback) = extract_triples_with_info(sentence, cfg);
        if used_fallback && !sentence.basic_edges.is_empty() {
            fallbacks += 1;
        }
        for triple in &triples {
            records.push(TripleRecord::from_triple(&doc.id, sentence_index, triple));
        }
    }
    (records, fallbacks)
}

/// Group position records into per-document position sets.
pub fn positions_by_doc(records: &[NerPositionRecord]) -> BTreeMap<String, std::collections::BTreeSet<usize>> {
    let mut by_doc: BTreeMap<String, std::collections::BTreeSet<usize>> = BTreeMap::new();
    for record in records {
        by_doc
            .entry(record.doc_id.clone())
            .or_default()
            .insert(record.position);
    }
    by_doc
}
