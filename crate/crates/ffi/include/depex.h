/* C interface for the depex extraction engine. */

#ifndef DEPEX_H
#define DEPEX_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result status for every fallible call.
 */
typedef enum DepexStatus {
  DEPEX_STATUS_OK = 0,
  DEPEX_STATUS_NULL_POINTER = 1,
  DEPEX_STATUS_INVALID_UTF8 = 2,
  DEPEX_STATUS_INVALID_ARGUMENT = 3,
  DEPEX_STATUS_PARSE_ERROR = 4,
  DEPEX_STATUS_EVAL_ERROR = 5,
  DEPEX_STATUS_INTERNAL_ERROR = 6,
} DepexStatus;

/**
 * An opaque parsed corpus.
 */
typedef struct DepexCorpus DepexCorpus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or NULL when none.
 * Free with [`depex_string_free`].
 */
char *depex_last_error_message(void);

/**
 * Library version as a static string; do not free.
 */
const char *depex_version(void);

/**
 * Release a string allocated by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned through a depex out-parameter
 * (or [`depex_last_error_message`]) and not yet freed. NULL is a no-op.
 */
void depex_string_free(char *s);

/**
 * Parse CoNLL-U text into a corpus handle.
 *
 * # Safety
 * `conllu_text` must be a NUL-terminated UTF-8 string and `out_corpus` a
 * valid pointer; on `Ok` the handle must later be released with
 * [`depex_corpus_free`].
 */
enum DepexStatus depex_corpus_parse_conllu(const char *conllu_text,
                                           struct DepexCorpus **out_corpus);

/**
 * Release a corpus handle. NULL is a no-op.
 *
 * # Safety
 * `corpus` must come from [`depex_corpus_parse_conllu`] and not yet be freed.
 */
void depex_corpus_free(struct DepexCorpus *corpus);

/**
 * Number of sentences in the corpus (0 for NULL).
 *
 * # Safety
 * `corpus` must be a live handle or NULL.
 */
uint64_t depex_corpus_sentence_count(const struct DepexCorpus *corpus);

/**
 * Number of tokens in the corpus (0 for NULL).
 *
 * # Safety
 * `corpus` must be a live handle or NULL.
 */
uint64_t depex_corpus_token_count(const struct DepexCorpus *corpus);

/**
 * Serialize the corpus back to CoNLL-U into `out_text`.
 *
 * # Safety
 * `corpus` must be a live handle; `out_text` a valid pointer. Free the
 * result with [`depex_string_free`].
 */
enum DepexStatus depex_corpus_to_conllu(const struct DepexCorpus *corpus, char **out_text);

/**
 * Run the heuristic SRL cascade with default rules over the corpus and
 * return the triples as JSON Lines.
 *
 * # Safety
 * `corpus` must be a live handle; `doc_id` NUL-terminated UTF-8; `out_jsonl`
 * valid. Free the result with [`depex_string_free`].
 */
enum DepexStatus depex_corpus_triples_jsonl(const struct DepexCorpus *corpus,
                                            const char *doc_id,
                                            char **out_jsonl);

/**
 * Extract noun tokens (optionally restricted to a comma-separated xpos
 * filter; NULL means the proper-noun default) as a prediction TSV of
 * `doc_id<TAB>position<TAB>token` rows with document-global positions.
 *
 * # Safety
 * `corpus` must be a live handle; `doc_id` NUL-terminated UTF-8;
 * `pos_filter_csv` NUL-terminated UTF-8 or NULL; `out_tsv` valid. Free the
 * result with [`depex_string_free`].
 */
enum DepexStatus depex_corpus_noun_positions_tsv(const struct DepexCorpus *corpus,
                                                 const char *doc_id,
                                                 const char *pos_filter_csv,
                                                 char **out_tsv);

/**
 * Convert a BILUO labeled dataset (TSV text) to BIO.
 *
 * # Safety
 * `labeled_tsv` must be NUL-terminated UTF-8 and `out_tsv` valid. Free the
 * result with [`depex_string_free`].
 */
enum DepexStatus depex_biluo_to_bio(const char *labeled_tsv, char **out_tsv);

/**
 * Score NER predictions against a benchmark (both in the position-TSV
 * format) and return the metrics as a JSON object. `data_driven` enables
 * true negatives and accuracy; `total_tokens` is the token count of the
 * evaluated corpus (ignored in symbolic mode when 0).
 *
 * # Safety
 * String arguments must be NUL-terminated UTF-8; `out_json` valid. Free the
 * result with [`depex_string_free`].
 */
enum DepexStatus depex_eval_ner(const char *benchmark_tsv,
                                const char *predictions_tsv,
                                uint64_t total_tokens,
                                bool data_driven,
                                char **out_json);

/**
 * Score SRL predictions (triple JSON Lines) against a keyword benchmark
 * (JSON Lines) and return the full report as JSON.
 *
 * # Safety
 * String arguments must be NUL-terminated UTF-8; `out_json` valid. Free the
 * result with [`depex_string_free`].
 */
enum DepexStatus depex_eval_srl(const char *benchmark_jsonl,
                                const char *predictions_jsonl,
                                char **out_json);

/**
 * Clean raw text: strip HTML tags and special characters, collapse
 * whitespace, lowercase; each step individually toggleable, applied in
 * that fixed order.
 *
 * # Safety
 * `text` must be NUL-terminated UTF-8 and `out_text` valid. Free the result
 * with [`depex_string_free`].
 */
enum DepexStatus depex_preprocess(const char *text,
                                  bool strip_html_tags,
                                  bool strip_special_chars,
                                  bool collapse_whitespace,
                                  bool lowercase,
                                  char **out_text);

/**
 * Inverse-frequency class weights from a JSON object of label→count;
 * returns a JSON object of label→weight.
 *
 * # Safety
 * `counts_json` must be NUL-terminated UTF-8 and `out_json` valid. Free the
 * result with [`depex_string_free`].
 */
enum DepexStatus depex_class_weights(const char *counts_json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEPEX_H */
