//! Batch command-line interface: stats, extraction, dataset construction,
//! and evaluation over corpora and prediction files.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use depex_core::corpus::{compute_stats, Genre, LengthClass};
use depex_core::dataset::{
    biluo_to_bio, broadcast_frames, class_weights, decode_spans, gazetteer_tag,
    read_labeled_tsv, read_sentence_frames_jsonl, write_frame_samples_jsonl, write_labeled_tsv,
    Gazetteer, LabeledSequence, Scheme,
};
use depex_core::error::{read_to_string, write_atomic, Error};
use depex_core::eval::{
    ner_confusion, ner_metrics, pair_samples, read_positions_tsv_path, read_srl_bench_jsonl_path,
    srl_scores, NerMode, NerPositionRecord,
};
use depex_core::ner::{all_nouns_pos_filter, default_pos_filter, rank_nouns, with_hypernyms, Taxonomy};
use depex_core::report::{Report, ReportFormat, ReportRow};
use depex_core::runner::{
    load_documents, ner_pass, positions_by_doc, run_per_document, srl_pass, LoadOptions,
};
use depex_core::srl::{write_triples_jsonl, SrlRule, SrlRuleConfig};

#[derive(Parser)]
#[command(
    name = "depex",
    version,
    about = "Dependency-parse information extraction and evaluation harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DocMeta {
    /// Document genre label carried into reports.
    #[arg(long, value_parser = clap::value_parser!(Genre))]
    genre: Option<Genre>,
    /// Document length-class label carried into reports.
    #[arg(long = "length", value_parser = clap::value_parser!(LengthClass))]
    length: Option<LengthClass>,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Input path: a .conllu file, a directory of .conllu files, or a raw
    /// text file (raw text requires --endpoint).
    #[arg(long)]
    input: PathBuf,
    /// Parse server endpoint for raw-text input, e.g. http://localhost:9000.
    #[arg(long)]
    endpoint: Option<String>,
}

#[derive(Args, Clone)]
struct ReportArgs {
    /// Report format.
    #[arg(long, default_value = "json")]
    format: String,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the generation timestamp so reruns are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print sentence/token counts per document.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        meta: DocMeta,
        #[command(flatten)]
        report: ReportArgs,
        /// Per-document worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Heuristic NER: extract nouns, emit prediction rows and ranked lemmas.
    Ner {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        meta: DocMeta,
        /// Taxonomy TSV (lemma<TAB>hypernym) for class lookup.
        #[arg(long)]
        taxonomy: Option<PathBuf>,
        /// Comma-separated xpos tags, or the preset `all-nouns`.
        #[arg(long)]
        pos_filter: Option<String>,
        /// Keep only the top-k ranked lemmas.
        #[arg(long, default_value_t = 100)]
        top_k: usize,
        /// Output directory for <doc>.predictions.tsv and <doc>.ranked.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Heuristic SRL: extract subject–predicate–object triples (JSON Lines).
    Srl {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        meta: DocMeta,
        /// Disable one cascade rule (repeatable): passive, negation,
        /// oblique_fallback, compound, conjunction, subject, object.
        #[arg(long = "disable-rule")]
        disable_rule: Vec<SrlRule>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Gazetteer-annotate whitespace-tokenized sentences into BILUO tags.
    Annotate {
        /// Text file, one sentence per line, tokens separated by spaces.
        #[arg(long)]
        input: PathBuf,
        /// Gazetteer TSV (phrase<TAB>label).
        #[arg(long)]
        gazetteer: PathBuf,
        /// Output labeled TSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also emit class weights over the produced tags (JSON).
        #[arg(long)]
        weights_out: Option<PathBuf>,
    },
    /// Convert labeled datasets between schemes and representations.
    Convert {
        /// Labeled TSV input (token<TAB>tag, blank line between sentences).
        #[arg(long)]
        input: PathBuf,
        /// Convert BILUO tags to BIO (L→I, U→B).
        #[arg(long, conflicts_with = "bio_to_positions")]
        biluo_to_bio: bool,
        /// Decode BIO tags to entity token positions (prediction TSV).
        #[arg(long)]
        bio_to_positions: bool,
        /// Reject orphan I tags instead of repairing them to B.
        #[arg(long)]
        strict_bio: bool,
        /// doc_id for emitted position rows (default: input file stem).
        #[arg(long)]
        doc_id: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Broadcast per-sentence SRL frame annotations into training samples.
    Broadcast {
        /// JSON Lines input: {tokens, srl_frames: [{verb, frames}]}.
        #[arg(long)]
        input: PathBuf,
        /// Output frame dataset (JSON Lines {tokens, verb, frames}).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also emit class weights over the produced tags (JSON).
        #[arg(long)]
        weights_out: Option<PathBuf>,
    },
    /// Score NER predictions against a position benchmark.
    EvalNer {
        /// Benchmark TSV: doc_id<TAB>position<TAB>token.
        #[arg(long)]
        benchmark: PathBuf,
        /// Prediction TSV in the same shape.
        #[arg(long)]
        predictions: PathBuf,
        /// symbolic (no true negatives) or data-driven.
        #[arg(long, default_value = "symbolic")]
        mode: String,
        /// Per-document token totals from this corpus (for accuracy).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Token total when the benchmark covers a single document.
        #[arg(long)]
        total_tokens: Option<usize>,
        /// Truncate each document's benchmark to its first N rows.
        #[arg(long)]
        max_positions: Option<usize>,
        /// Method label carried into the report rows.
        #[arg(long, default_value = "heuristic")]
        method: String,
        #[command(flatten)]
        meta: DocMeta,
        #[command(flatten)]
        report: ReportArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Score SRL predictions against a keyword benchmark.
    EvalSrl {
        /// Benchmark JSON Lines: {doc_id, sentence_index, subject_keyword,
        /// predicate_keyword, object_keyword}.
        #[arg(long)]
        benchmark: PathBuf,
        /// Prediction JSON Lines (the triple output format).
        #[arg(long)]
        predictions: PathBuf,
        /// Method label carried into the report rows.
        #[arg(long, default_value = "heuristic")]
        method: String,
        #[command(flatten)]
        meta: DocMeta,
        #[command(flatten)]
        report: ReportArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Merge eval report JSON files into one table.
    Report {
        /// Report JSON files produced by eval-ner / eval-srl.
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Transport(_) | Error::Server(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_options(input: &InputArgs, meta: &DocMeta) -> LoadOptions {
    LoadOptions {
        genre: meta.genre,
        length_class: meta.length,
        endpoint: input.endpoint.clone(),
        ..LoadOptions::default()
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Error> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn parse_pos_filter(spec: Option<&str>) -> Result<BTreeSet<String>, Error> {
    let filter = match spec {
        None => default_pos_filter(),
        Some("all-nouns") => all_nouns_pos_filter(),
        Some(list) => list
            .split(',')
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty())
            .collect(),
    };
    if filter.is_empty() {
        return Err(Error::validation("--pos-filter must name at least one tag"));
    }
    Ok(filter)
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Stats {
            input,
            meta,
            report,
            jobs,
        } => {
            let format: ReportFormat = report.format.parse()?;
            let documents = load_documents(&input.input, &load_options(&input, &meta))?;
            let stats = run_per_document(&documents, jobs, compute_stats)?;
            let text = match format {
                ReportFormat::Json => {
                    let rows: Vec<serde_json::Value> = documents
                        .iter()
                        .zip(&stats)
                        .map(|(doc, stat)| {
                            serde_json::json!({
                                "doc_id": doc.id,
                                "genre": doc.genre,
                                "length_class": doc.length_class,
                                "total_sentences": stat.total_sentences,
                                "total_tokens": stat.total_tokens,
                            })
                        })
                        .collect();
                    let mut text = serde_json::to_string_pretty(&rows)?;
                    text.push('\n');
                    text
                }
                ReportFormat::Csv => {
                    let mut text = String::from("doc_id,total_sentences,total_tokens\n");
                    for (doc, stat) in documents.iter().zip(&stats) {
                        text.push_str(&format!(
                            "{},{},{}\n",
                            doc.id, stat.total_sentences, stat.total_tokens
                        ));
                    }
                    text
                }
                ReportFormat::Markdown => {
                    let mut text = String::from(
                        "| doc_id | total_sentences | total_tokens |\n| --- | --- | --- |\n",
                    );
                    for (doc, stat) in documents.iter().zip(&stats) {
                        text.push_str(&format!(
                            "| {} | {} | {} |\n",
                            doc.id, stat.total_sentences, stat.total_tokens
                        ));
                    }
                    text
                }
            };
            emit(report.out.as_deref(), &text)
        }

        Command::Ner {
            input,
            meta,
            taxonomy,
            pos_filter,
            top_k,
            out,
            jobs,
        } => {
            let filter = parse_pos_filter(pos_filter.as_deref())?;
            let documents = load_documents(&input.input, &load_options(&input, &meta))?;
            let taxonomy = match &taxonomy {
                Some(path) => Some(Taxonomy::from_tsv_path(path)?),
                None => None,
            };
            let passes = run_per_document(&documents, jobs, |doc| {
                let (records, _) = ner_pass(doc, &filter);
                let mut ranked = rank_nouns(doc, &filter, top_k);
                if let Some(taxonomy) = &taxonomy {
                    ranked = with_hypernyms(ranked, taxonomy);
                }
                (doc.id.clone(), records, ranked)
            })?;
            match &out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                    for (doc_id, records, ranked) in &passes {
                        write_atomic(
                            dir.join(format!("{doc_id}.predictions.tsv")),
                            &depex_core::eval::write_positions_tsv(records),
                        )?;
                        let mut ranked_json = serde_json::to_string_pretty(ranked)?;
                        ranked_json.push('\n');
                        write_atomic(dir.join(format!("{doc_id}.ranked.json")), &ranked_json)?;
                    }
                    Ok(())
                }
                None => {
                    let mut all = String::new();
                    for (_, records, _) in &passes {
                        all.push_str(&depex_core::eval::write_positions_tsv(records));
                    }
                    emit(None, &all)
                }
            }
        }

        Command::Srl {
            input,
            meta,
            disable_rule,
            out,
            jobs,
        } => {
            let documents = load_documents(&input.input, &load_options(&input, &meta))?;
            let mut cfg = SrlRuleConfig::default();
            for rule in disable_rule {
                cfg = cfg.disable(rule);
            }
            let passes = run_per_document(&documents, jobs, |doc| srl_pass(doc, &cfg))?;
            let mut records = Vec::new();
            let mut fallbacks = 0usize;
            for (mut doc_records, doc_fallbacks) in passes {
                records.append(&mut doc_records);
                fallbacks += doc_fallbacks;
            }
            if fallbacks > 0 {
                eprintln!("warning: {fallbacks} sentence(s) used basic-edge fallback");
            }
            emit(out.as_deref(), &write_triples_jsonl(&records))
        }

        Command::Annotate {
            input,
            gazetteer,
            out,
            weights_out,
        } => {
            let gazetteer = Gazetteer::from_tsv_path(&gazetteer)?;
            let text = read_to_string(&input)?;
            let sequences: Vec<LabeledSequence> = text
                .lines()
                .filter(|line| !line.trim().is_empty())
                .map(|line| {
                    let tokens: Vec<&str> = line.split_whitespace().collect();
                    gazetteer_tag(&tokens, &gazetteer)
                })
                .collect();
            if let Some(path) = &weights_out {
                emit_tag_weights(&sequences, path)?;
            }
            emit(out.as_deref(), &write_labeled_tsv(&sequences))
        }

        Command::Convert {
            input,
            biluo_to_bio: do_biluo,
            bio_to_positions,
            strict_bio,
            doc_id,
            out,
        } => {
            if !do_biluo && !bio_to_positions {
                return Err(Error::validation(
                    "convert needs --biluo-to-bio or --bio-to-positions",
                ));
            }
            let text = read_to_string(&input)?;
            if do_biluo {
                let sequences = read_labeled_tsv(&text, Scheme::Biluo)?;
                let converted: Vec<LabeledSequence> = sequences
                    .iter()
                    .map(biluo_to_bio)
                    .collect::<Result<_, _>>()?;
                emit(out.as_deref(), &write_labeled_tsv(&converted))
            } else {
                let doc_id = doc_id.unwrap_or_else(|| {
                    input
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "doc".to_string())
                });
                let sequences = read_labeled_tsv(&text, Scheme::Bio)?;
                let mut records = Vec::new();
                let mut offset = 0usize;
                for seq in &sequences {
                    for span in decode_spans(seq, strict_bio)? {
                        for position in span.start..=span.end {
                            records.push(NerPositionRecord {
                                doc_id: doc_id.clone(),
                                position: offset + position,
                                token: seq.tokens[position].clone(),
                            });
                        }
                    }
                    offset += seq.tokens.len();
                }
                emit(
                    out.as_deref(),
                    &depex_core::eval::write_positions_tsv(&records),
                )
            }
        }

        Command::Broadcast {
            input,
            out,
            weights_out,
        } => {
            let mut samples = Vec::new();
            for record in read_sentence_frames_jsonl(&input)? {
                samples.extend(broadcast_frames(&record.tokens, &record.srl_frames)?);
            }
            if let Some(path) = &weights_out {
                let mut counts: BTreeMap<String, usize> = BTreeMap::new();
                for sample in &samples {
                    for tag in &sample.frames {
                        if tag != "O" {
                            *counts.entry(tag.clone()).or_insert(0) += 1;
                        }
                    }
                }
                let weights = class_weights(&counts)?;
                write_atomic(path, &weights.to_json_string())?;
            }
            emit(out.as_deref(), &write_frame_samples_jsonl(&samples))
        }

        Command::EvalNer {
            benchmark,
            predictions,
            mode,
            input,
            total_tokens,
            max_positions,
            method,
            meta,
            report,
            jobs,
        } => {
            let format: ReportFormat = report.format.parse()?;
            let mode: NerMode = mode.parse()?;
            let bench_records = read_positions_tsv_path(&benchmark)?;
            let pred_records = read_positions_tsv_path(&predictions)?;

            // Benchmark rows stay in file order so --max-positions keeps the
            // first N annotations per document.
            let mut bench_by_doc: BTreeMap<String, Vec<usize>> = BTreeMap::new();
            for record in &bench_records {
                bench_by_doc
                    .entry(record.doc_id.clone())
                    .or_default()
                    .push(record.position);
            }
            if let Some(cap) = max_positions {
                for positions in bench_by_doc.values_mut() {
                    positions.truncate(cap);
                }
            }
            let pred_by_doc = positions_by_doc(&pred_records);

            let totals = document_token_totals(
                input.as_deref(),
                total_tokens,
                &bench_by_doc,
                &pred_by_doc,
                mode,
            )?;

            let doc_ids: Vec<String> = bench_by_doc.keys().cloned().collect();
            let empty = BTreeSet::new();
            let rows: Vec<ReportRow> = run_per_document_ids(&doc_ids, jobs, |doc_id| {
                let bench: BTreeSet<usize> =
                    bench_by_doc[doc_id].iter().copied().collect();
                let predicted = pred_by_doc.get(doc_id).unwrap_or(&empty);
                let total = totals[doc_id];
                let counts = ner_confusion(predicted, &bench, total, mode)?;
                let metrics = ner_metrics(&counts);
                Ok(ReportRow::from_ner(
                    doc_id,
                    meta.genre,
                    meta.length,
                    &method,
                    &metrics,
                    counts,
                ))
            })?;

            let rendered = Report::new(rows, !report.no_timestamp).render(format);
            emit(report.out.as_deref(), &rendered)
        }

        Command::EvalSrl {
            benchmark,
            predictions,
            method,
            meta,
            report,
            jobs,
        } => {
            let format: ReportFormat = report.format.parse()?;
            let bench = read_srl_bench_jsonl_path(&benchmark)?;
            if bench.is_empty() {
                return Err(Error::validation("empty SRL benchmark"));
            }
            let records = depex_core::srl::read_triples_jsonl_path(&predictions)?;
            let mut doc_ids: Vec<String> = bench.iter().map(|b| b.doc_id.clone()).collect();
            doc_ids.sort();
            doc_ids.dedup();
            let rows: Vec<ReportRow> = run_per_document_ids(&doc_ids, jobs, |doc_id| {
                let doc_bench: Vec<_> = bench
                    .iter()
                    .filter(|b| b.doc_id == *doc_id)
                    .cloned()
                    .collect();
                let samples = pair_samples(&doc_bench, &records);
                let scores = srl_scores(&samples)?;
                Ok(ReportRow::from_srl(
                    doc_id,
                    meta.genre,
                    meta.length,
                    &method,
                    &scores,
                ))
            })?;
            let rendered = Report::new(rows, !report.no_timestamp).render(format);
            emit(report.out.as_deref(), &rendered)
        }

        Command::Report { input, report } => {
            let format: ReportFormat = report.format.parse()?;
            let mut rows = Vec::new();
            for path in &input {
                let parsed = depex_core::report::parse_report_json(&read_to_string(path)?)?;
                rows.extend(parsed.rows);
            }
            let rendered = Report::new(rows, !report.no_timestamp).render(format);
            emit(report.out.as_deref(), &rendered)
        }
    }
}

/// Per-document token totals for NER accuracy: derived from --input when
/// given, from --total-tokens for a single document, and in symbolic mode
/// (no true negatives) defaulting to the smallest total that fits the data.
fn document_token_totals(
    input: Option<&Path>,
    total_tokens: Option<usize>,
    bench_by_doc: &BTreeMap<String, Vec<usize>>,
    pred_by_doc: &BTreeMap<String, BTreeSet<usize>>,
    mode: NerMode,
) -> Result<BTreeMap<String, usize>, Error> {
    let mut totals = BTreeMap::new();
    if let Some(path) = input {
        let documents = load_documents(path, &LoadOptions::default())?;
        for doc in &documents {
            totals.insert(doc.id.clone(), compute_stats(doc).total_tokens);
        }
    }
    for doc_id in bench_by_doc.keys() {
        if totals.contains_key(doc_id) {
            continue;
        }
        let max_seen = bench_by_doc[doc_id]
            .iter()
            .copied()
            .chain(
                pred_by_doc
                    .get(doc_id)
                    .into_iter()
                    .flat_map(|s| s.iter().copied()),
            )
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        match (total_tokens, mode) {
            (Some(total), _) if bench_by_doc.len() == 1 => {
                if total < max_seen {
                    return Err(Error::validation(format!(
                        "--total-tokens {total} is smaller than position {}",
                        max_seen - 1
                    )));
                }
                totals.insert(doc_id.clone(), total);
            }
            (Some(_), _) => {
                return Err(Error::validation(
                    "--total-tokens applies to a single document; use --input for multi-document corpora",
                ));
            }
            (None, NerMode::Symbolic) => {
                totals.insert(doc_id.clone(), max_seen);
            }
            (None, NerMode::DataDriven) => {
                return Err(Error::validation(format!(
                    "data-driven mode needs token totals for `{doc_id}`: pass --input or --total-tokens"
                )));
            }
        }
    }
    Ok(totals)
}

/// Parallel map over doc ids with a fallible body, preserving order.
fn run_per_document_ids<T, F>(doc_ids: &[String], jobs: usize, f: F) -> Result<Vec<T>, Error>
where
    T: Send,
    F: Fn(&String) -> Result<T, Error> + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::validation(format!("thread pool: {e}")))?;
    pool.install(|| doc_ids.par_iter().map(f).collect())
}

fn emit_tag_weights(sequences: &[LabeledSequence], path: &Path) -> Result<(), Error> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for seq in sequences {
        for tag in &seq.tags {
            if tag != "O" {
                *counts.entry(tag.clone()).or_insert(0) += 1;
            }
        }
    }
    let weights = class_weights(&counts)?;
    write_atomic(path, &weights.to_json_string())
}
