#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mms/embedding.hpp"
#include "mms/keyword_index.hpp"
#include "mms/ranking.hpp"

namespace mms {

// Full engine configuration. Defaults reproduce the shipped setup: two
// 2048/8192 spaces, BM25 keyword recall, min-match 2 sparse recall, a
// 10K-deep rescore at 2/3 embedding weight, the 4-word long-query route
// with the 1/3-2/3 dual-space blend, and intent recovery below 5 results.
struct EngineConfig {
  std::vector<EmbeddingSpace> spaces;
  std::string primary_space = "text_image";  // carries the sparse form
  std::string intent_space = "intent";       // second space for long queries

  Bm25Params bm25;
  FieldBoosts boosts;

  uint32_t min_dims = 2;
  size_t sparse_recall_limit = 0;   // 0 = unlimited
  size_t keyword_recall_limit = 0;  // 0 = unlimited

  FirstRoundWeights first_round;
  RescoreConfig rescore;

  uint32_t long_query_min_words = 4;
  bool long_hybrid_union = false;  // run long queries through the hybrid route too
  bool recovery_enabled = true;
  uint32_t page_size = 50;

  // Empty: use the latest template date in the corpus as "now".
  std::string reference_date;

  // Empty: use the builtin fixture graph.
  std::string intent_graph_path;

  static EngineConfig defaults();
  static EngineConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  const EmbeddingSpace& space(const std::string& name) const;
  void validate() const;
};

}  // namespace mms
