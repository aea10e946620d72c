#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "mms/config.hpp"
#include "mms/embedding.hpp"
#include "mms/intent_graph.hpp"
#include "mms/keyword_index.hpp"
#include "mms/ranking.hpp"
#include "mms/sparse_index.hpp"
#include "mms/template_record.hpp"

namespace mms {

// A template after ingestion: normalized dense embeddings per configured
// space (catalog order), the sparse form for the primary space, resolved
// intent node ids, and the fields ranking needs.
struct StoredDoc {
  std::string id;
  std::string title;
  int64_t date_days = 0;
  uint64_t impressions = 0;
  uint64_t clicks = 0;
  uint64_t edits = 0;
  uint64_t exports = 0;
  std::vector<std::string> intent_ids;
  std::vector<std::vector<float>> dense;
  SparseEmbedding sparse;
};

struct QueryPlan {
  enum class Route : uint8_t { Hybrid = 0, Long = 1 };

  Route route = Route::Hybrid;
  uint32_t word_count = 0;
  std::vector<std::string> tokens;
  std::set<std::string> intents;
  FilterSpec filters;
};

const char* route_name(QueryPlan::Route r);

struct LocaleContext {
  std::optional<std::string> language;
  std::optional<std::string> region;
};

struct SearchRequest {
  std::string query;
  FilterSpec filters;
  LocaleContext locale;
  uint32_t page = 0;
  std::optional<uint32_t> page_size;
  bool explain = false;
  bool timings = false;
  std::optional<bool> recovery;  // overrides the config toggle when set
};

struct ResultExplain {
  double bm25_raw = 0.0;
  double bm25_norm = 0.0;
  double recency = 0.0;
  double locale = 0.0;
  double behavior = 0.0;
  double first_round = 0.0;
  double first_round_norm = 0.0;
  double sim_primary = 0.0;
  double sim_intent = 0.0;
  double sim_blend = 0.0;
  bool rescored = false;
  bool demoted = false;
  uint32_t shared_intents = 0;
};

struct ResultItem {
  std::string id;
  std::string title;
  double score = 0.0;
  bool keyword = false;
  bool sparse = false;
  bool recovery = false;
  bool long_path = false;
  std::optional<ResultExplain> explain;
};

struct StageCounts {
  size_t keyword_hits = 0;
  size_t sparse_hits = 0;
  size_t union_size = 0;
  size_t rescored = 0;
  size_t organic = 0;
  size_t recovered = 0;
};

struct StageTimings {
  int64_t plan_us = 0;
  int64_t recall_us = 0;
  int64_t first_round_us = 0;
  int64_t rescore_us = 0;
  int64_t recovery_us = 0;
  int64_t total_us = 0;
};

struct SearchResponse {
  std::string query;
  QueryPlan plan;
  bool null_page = false;
  bool low_page = false;
  bool recovery_applied = false;
  size_t organic_count = 0;
  size_t total_count = 0;
  uint32_t page = 0;
  uint32_t page_size = 0;
  std::vector<ResultItem> results;
  StageCounts counts;
  StageTimings timings;

  // Canonical form excludes timings so identical (snapshot, config, query)
  // always yields identical bytes; pass include_timings for diagnostics.
  std::string to_json_text(bool include_timings = false) const;
};

struct IngestError {
  size_t line = 0;
  std::string message;
};

struct IngestReport {
  size_t indexed = 0;
  size_t skipped = 0;
  std::vector<IngestError> errors;
  std::string digest;

  std::string to_json_text() const;
};

// The end-to-end engine: ingestion builds the keyword, sparse and intent
// indexes over one immutable snapshot; queries are read-only and safe to
// run concurrently.
class Engine {
 public:
  explicit Engine(EngineConfig cfg);
  Engine(EngineConfig cfg, IntentGraph graph);

  IngestReport ingest_file(const std::string& path);
  IngestReport ingest_records(const std::vector<TemplateRecord>& records);

  bool ready() const { return built_; }
  size_t doc_count() const { return docs_.size(); }
  const EngineConfig& config() const { return config_; }
  const IntentGraph& graph() const { return graph_; }

  QueryPlan plan(const std::string& query_text, const FilterSpec& filters) const;
  SearchResponse search(const SearchRequest& req) const;

  struct LongHit {
    uint32_t doc_id = 0;
    double blend = 0.0;
    double sim_primary = 0.0;
    double sim_intent = 0.0;
  };
  // Exact blended-cosine scan over every document passing the filters.
  std::vector<LongHit> long_query_scan(const DenseEmbedding& q_primary,
                                       const DenseEmbedding& q_intent,
                                       const FilterSpec& filters) const;

  void save_snapshot(const std::string& path) const;
  static Engine load_snapshot(const std::string& path);
  std::string digest() const;

  // Introspection for evaluation and tests.
  const std::vector<StoredDoc>& docs() const { return docs_; }
  const StoredDoc& doc(uint32_t ordinal) const;
  std::optional<uint32_t> ordinal_of(const std::string& id) const;
  const SparseIndex& sparse_index() const { return sparse_; }
  const KeywordIndex& keyword_index() const { return keyword_; }
  const IntentPostings& intent_postings() const { return intents_; }
  size_t space_index(const std::string& name) const;
  int64_t reference_days() const { return reference_days_; }

  DenseEmbedding embed_query(const std::string& text, const std::string& space_name) const;
  SparseEmbedding sparsify_query(const DenseEmbedding& dense) const;

 private:
  struct Ranked {
    uint32_t ordinal = 0;
    ResultItem item;
  };

  void require_ready() const;
  void serialize_section(uint32_t tag, ByteWriter& w) const;
  uint64_t compute_digest() const;
  StoredDoc build_doc(const TemplateRecord& record) const;
  IngestReport ingest_lines(const std::vector<std::pair<size_t, TemplateRecord>>& records);
  std::vector<Ranked> run_hybrid(const QueryPlan& plan, const SearchRequest& req,
                                 StageCounts& counts, StageTimings& timings, bool explain) const;
  std::vector<Ranked> run_long(const QueryPlan& plan, StageCounts& counts, StageTimings& timings,
                               bool explain) const;

  EngineConfig config_;
  IntentGraph graph_;
  std::vector<Sparsifier> sparsifiers_;  // aligned with config_.spaces
  size_t primary_idx_ = 0;
  size_t intent_idx_ = 0;

  std::vector<StoredDoc> docs_;
  std::unordered_map<std::string, uint32_t> id_to_ordinal_;
  KeywordIndex keyword_;
  SparseIndex sparse_;
  IntentPostings intents_;
  int64_t reference_days_ = 0;
  uint64_t digest_ = 0;
  bool built_ = false;
};

}  // namespace mms
