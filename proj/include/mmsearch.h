/*
 * mmsearch C API: a hybrid multi-modal template search engine behind an
 * opaque handle. All structured inputs and outputs are JSON strings; every
 * char** output is heap-allocated and must be released with
 * mms_string_free. Functions return MMS_OK on success; on failure,
 * mms_last_error() describes the most recent error on the calling thread.
 *
 * Engines are immutable once built or loaded: any number of threads may
 * search the same engine concurrently.
 */
#ifndef MMSEARCH_H
#define MMSEARCH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mms_status {
  MMS_OK = 0,
  MMS_ERR_INVALID_ARGUMENT = 1,
  MMS_ERR_PARSE = 2,
  MMS_ERR_EMPTY_QUERY = 3,
  MMS_ERR_EMPTY_TEXT = 4,
  MMS_ERR_SPACE_MISMATCH = 5,
  MMS_ERR_ZERO_VECTOR = 6,
  MMS_ERR_DUPLICATE_DOCUMENT = 7,
  MMS_ERR_MISSING_EMBEDDING = 8,
  MMS_ERR_DEGENERATE_BATCH = 9,
  MMS_ERR_SNAPSHOT_NOT_LOADED = 10,
  MMS_ERR_CORRUPT_SNAPSHOT = 11,
  MMS_ERR_VERSION_MISMATCH = 12,
  MMS_ERR_IO = 13,
  MMS_ERR_CONFIG = 14,
  MMS_ERR_STATE = 15,
  MMS_ERR_INTERNAL = 16
} mms_status;

typedef struct mms_engine mms_engine;

const char* mms_version(void);
const char* mms_status_name(mms_status status);

/* Message for the last failure on this thread; empty string if none. The
 * pointer stays valid until the next failing call on the same thread. */
const char* mms_last_error(void);

/* Create an empty engine from a JSON configuration ("{}" for defaults). */
mms_status mms_engine_new(const char* config_json, mms_engine** out_engine);

/* Load a ready engine from a snapshot file written by mms_engine_save. */
mms_status mms_engine_open(const char* snapshot_path, mms_engine** out_engine);

void mms_engine_free(mms_engine* engine);

/* Ingest a line-delimited JSON corpus, build all indexes and freeze the
 * engine. Returns a JSON build report (indexed/skipped counts, per-line
 * errors, snapshot digest). An engine can be built exactly once. */
mms_status mms_engine_ingest(mms_engine* engine, const char* corpus_jsonl_path,
                             char** report_json_out);

mms_status mms_engine_save(const mms_engine* engine, const char* snapshot_path);

/* Request: {"query": "...", "filters": {...}, "locale": {...}, "page": 0,
 *           "page_size": 50, "explain": false, "timings": false,
 *           "recovery": true}
 * Only "query" is required. Returns the search response as JSON. */
mms_status mms_engine_search(const mms_engine* engine, const char* request_json,
                             char** response_json_out);

/* {"status": "ok", "doc_count": N, "snapshot_digest": "..."} */
mms_status mms_engine_health(const mms_engine* engine, char** health_json_out);

/* Offline evaluation. Request selects the protocol:
 *   {"mode": "title_as_query", "sample": 200, "seed": 7}
 *   {"mode": "null_rate", "queries": [...] | "queries_path": "...",
 *    "recovery": true}
 *   {"mode": "overlap", "k": 100, "queries": [...] | "queries_path": "..."}
 *   {"mode": "latency", "queries": [...] | "queries_path": "..."} */
mms_status mms_engine_eval(const mms_engine* engine, const char* request_json,
                           char** report_json_out);

/* Numerical check of the contrastive loss module (no engine needed):
 * analytic vs finite-difference gradients on seeded batches, the reference
 * reduction, and the pinned hand example. Request: {"batches": 50,
 * "seed": 13, "dim": 16, "temperature": 0.07} (all optional). */
mms_status mms_loss_check(const char* request_json, char** report_json_out);

/* Build a seeded synthetic corpus and engine, then compare sparse-recall
 * latency against an exhaustive dense scan. Request: {"docs": 300000,
 * "seed": 11, "queries": 32} (all optional). */
mms_status mms_bench(const char* request_json, char** report_json_out);

/* Generate a synthetic corpus plus query sets on disk. Request:
 *   {"docs": 10000, "seed": 7, "corpus_path": "corpus.jsonl",
 *    "queries_path": "queries.jsonl"}    (queries_path optional)
 * Returns a JSON summary of what was written. */
mms_status mms_synth_corpus(const char* request_json, char** summary_json_out);

void mms_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MMSEARCH_H */
