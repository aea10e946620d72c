#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mms/engine.hpp"

namespace mms {

struct EvalQuery {
  std::string query;
  std::vector<std::string> expected_ids;
};

struct EvalQuerySet {
  std::vector<EvalQuery> queries;
};

// One line per query: {"query": "...", "expected": ["id", ...]}
EvalQuerySet read_query_set_jsonl(const std::string& path);
void write_query_set_jsonl(const EvalQuerySet& set, const std::string& path);

struct PerQueryRow {
  std::string query;
  int64_t best_rank = -1;                // 1-based; -1 when no expected doc returned
  std::vector<int64_t> expected_ranks;   // aligned with expected_ids; -1 = absent
  size_t organic_count = 0;
  size_t total_count = 0;
  bool null_page = false;
  bool low_page = false;
};

struct EvalReport {
  std::vector<PerQueryRow> rows;
  double mrr = 0.0;
  double recall_at_1 = 0.0;
  double recall_at_10 = 0.0;
  double recall_at_100 = 0.0;
  double null_rate = 0.0;
  double low_rate = 0.0;

  // Aggregates are always derivable from the rows.
  void recompute_aggregates();

  std::string to_json_text() const;
  std::string summary_text() const;
  void write_jsonl(const std::string& path) const;
};

// Runs every query through the engine and records the ranks of the
// expected documents over the full result list.
EvalReport rank_eval(const Engine& engine, const EvalQuerySet& set);

// Title-as-query protocol: sample documents, query with their titles, and
// measure the rank of the source document.
EvalQuerySet title_query_set(const Engine& engine, size_t sample_count, uint64_t seed);
EvalReport title_as_query_eval(const Engine& engine, size_t sample_count, uint64_t seed);

struct NullRates {
  double null_rate = 0.0;
  double low_rate = 0.0;
  size_t query_count = 0;
};

// Fraction of queries with zero / fewer-than-five results. With recovery
// on, the rates are computed after recovery fills the page.
NullRates null_rate_eval(const Engine& engine, const std::vector<std::string>& queries,
                         bool recovery_on);

// Mean overlap@k between (sparse recall then exact dense ordering) and the
// exhaustive dense ranking, over the given queries.
double sparse_vs_dense_overlap(const Engine& engine, size_t k,
                               const std::vector<std::string>& queries);

struct LatencyReport {
  size_t corpus_size = 0;
  size_t query_count = 0;
  double sparse_p50_us = 0.0;
  double sparse_p95_us = 0.0;
  double dense_p50_us = 0.0;
  double dense_p95_us = 0.0;
  double p50_ratio = 0.0;  // dense_p50 / sparse_p50

  std::string to_json_text() const;
};

// Wall-clock comparison of the sparse-recall path against an exhaustive
// dense scan. Candidate sets are deterministic even though timings vary.
LatencyReport latency_bench(const Engine& engine, const std::vector<std::string>& queries);

}  // namespace mms
