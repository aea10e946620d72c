#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mms/common.hpp"

namespace mms {

// First-round (low latency) scoring weights. The four feature weights sum
// to one; sparse_only_demotion multiplies the score of candidates that
// were retrieved only by the sparse index.
struct FirstRoundWeights {
  double w_bm25 = 0.5;
  double w_recency = 0.2;
  double w_locale = 0.1;
  double w_behavior = 0.2;
  double recency_half_life_days = 90.0;
  double sparse_only_demotion = 0.8;

  void validate() const;
};

struct RescoreConfig {
  size_t depth = 10000;                          // K: how many candidates get dense rescoring
  double embed_weight = 2.0 / 3.0;               // weight on the dense similarity
  double long_query_intent_weight = 1.0 / 3.0;   // weight on the intent space inside the blend

  void validate() const;
};

struct CandidateFeatures {
  double bm25_norm = 0.0;      // min-max normalized over the candidate set
  double age_days = 0.0;       // clamped at 0
  double locale_match = 1.0;   // in [0, 1]
  double behavior_prior = 0.0; // in [0, 1]
  bool sparse_only = false;
};

// w_bm25*bm25 + w_recency*2^(-age/half_life) + w_locale*locale +
// w_behavior*prior, then multiplied by sparse_only_demotion when the
// candidate was matched only by the sparse index.
double first_round_score(const CandidateFeatures& features, const FirstRoundWeights& weights);

// Min-max normalization used before blending first-round scores with
// similarities: (x-min)/(max-min); all-equal positive sets map to 1, the
// all-zero set maps to 0.
double minmax_norm(double x, double min, double max);

// log(1 + edits + exports) / log(1 + max over the candidate set); 0 when
// no candidate has any engagement.
double behavior_prior(uint64_t edits_plus_exports, uint64_t max_in_set);

// Mean of language and region agreement; unset context dimensions count
// as matched, and document region "all" matches any requested region.
double locale_match_score(const std::optional<std::string>& ctx_language,
                          const std::optional<std::string>& ctx_region,
                          const std::string& doc_language, const std::string& doc_region);

struct FirstRoundItem {
  uint32_t doc_id = 0;
  double first_round = 0.0;
};

struct SimPair {
  double primary = 0.0;  // cosine in the text-image space
  double intent = 0.0;   // cosine in the intent space (long queries only)
};

struct RescoredItem {
  uint32_t doc_id = 0;
  double score = 0.0;
  bool rescored = false;
  double first_round = 0.0;
  double first_round_norm = 0.0;
  SimPair sim;
  double sim_blend = 0.0;
};

// Dense rescoring of the top `depth` candidates. `ranked` must already be
// in first-round order (descending score, ties by ascending doc_id).
// Rescored items are ordered by the blended score and always precede the
// below-depth tail, which keeps its first-round order. `sims` is invoked
// only for rescored candidates and may throw MissingEmbedding.
std::vector<RescoredItem> rescore_topk(const std::vector<FirstRoundItem>& ranked,
                                       const std::function<SimPair(uint32_t)>& sims,
                                       const RescoreConfig& cfg, bool long_query);

}  // namespace mms
