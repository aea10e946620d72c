#include "mms/ranking.hpp"

#include <algorithm>
#include <cmath>

namespace mms {

void FirstRoundWeights::validate() const {
  for (double w : {w_bm25, w_recency, w_locale, w_behavior}) {
    if (!(w >= 0.0)) fail(ErrorCode::Config, "first-round weights must be non-negative");
  }
  double sum = w_bm25 + w_recency + w_locale + w_behavior;
  if (std::abs(sum - 1.0) > 1e-9) {
    fail(ErrorCode::Config, "first-round weights must sum to 1");
  }
  if (!(recency_half_life_days > 0.0)) {
    fail(ErrorCode::Config, "recency_half_life_days must be positive");
  }
  if (!(sparse_only_demotion > 0.0) || sparse_only_demotion > 1.0) {
    fail(ErrorCode::Config, "sparse_only_demotion must be in (0, 1]");
  }
}

void RescoreConfig::validate() const {
  if (depth == 0) fail(ErrorCode::Config, "rescore depth must be >= 1");
  if (!(embed_weight >= 0.0) || embed_weight > 1.0) {
    fail(ErrorCode::Config, "embed_weight must be in [0, 1]");
  }
  if (!(long_query_intent_weight >= 0.0) || long_query_intent_weight > 1.0) {
    fail(ErrorCode::Config, "long_query_intent_weight must be in [0, 1]");
  }
}

double first_round_score(const CandidateFeatures& f, const FirstRoundWeights& w) {
  double age = std::max(0.0, f.age_days);
  double recency = std::exp2(-age / w.recency_half_life_days);
  double score = w.w_bm25 * f.bm25_norm + w.w_recency * recency + w.w_locale * f.locale_match +
                 w.w_behavior * f.behavior_prior;
  if (f.sparse_only) score *= w.sparse_only_demotion;
  return score;
}

double minmax_norm(double x, double min, double max) {
  if (max > min) return (x - min) / (max - min);
  return max > 0.0 ? 1.0 : 0.0;
}

double behavior_prior(uint64_t edits_plus_exports, uint64_t max_in_set) {
  if (max_in_set == 0) return 0.0;
  return std::log1p(static_cast<double>(edits_plus_exports)) /
         std::log1p(static_cast<double>(max_in_set));
}

double locale_match_score(const std::optional<std::string>& ctx_language,
                          const std::optional<std::string>& ctx_region,
                          const std::string& doc_language, const std::string& doc_region) {
  double lang = (!ctx_language || *ctx_language == doc_language) ? 1.0 : 0.0;
  double region =
      (!ctx_region || doc_region == "all" || *ctx_region == doc_region) ? 1.0 : 0.0;
  return (lang + region) / 2.0;
}

std::vector<RescoredItem> rescore_topk(const std::vector<FirstRoundItem>& ranked,
                                       const std::function<SimPair(uint32_t)>& sims,
                                       const RescoreConfig& cfg, bool long_query) {
  cfg.validate();

  double min_fr = 0.0, max_fr = 0.0;
  if (!ranked.empty()) {
    min_fr = max_fr = ranked.front().first_round;
    for (const auto& item : ranked) {
      min_fr = std::min(min_fr, item.first_round);
      max_fr = std::max(max_fr, item.first_round);
    }
  }

  const size_t k = std::min(cfg.depth, ranked.size());
  std::vector<RescoredItem> out;
  out.reserve(ranked.size());

  for (size_t i = 0; i < k; ++i) {
    RescoredItem item;
    item.doc_id = ranked[i].doc_id;
    item.rescored = true;
    item.first_round = ranked[i].first_round;
    item.first_round_norm = minmax_norm(item.first_round, min_fr, max_fr);
    item.sim = sims(item.doc_id);
    item.sim_blend = long_query
                         ? cfg.long_query_intent_weight * item.sim.intent +
                               (1.0 - cfg.long_query_intent_weight) * item.sim.primary
                         : item.sim.primary;
    item.score = cfg.embed_weight * item.sim_blend + (1.0 - cfg.embed_weight) * item.first_round_norm;
    out.push_back(item);
  }

  std::sort(out.begin(), out.end(), [](const RescoredItem& a, const RescoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });

  // The tail keeps its first-round order and never outranks rescored items.
  for (size_t i = k; i < ranked.size(); ++i) {
    RescoredItem item;
    item.doc_id = ranked[i].doc_id;
    item.rescored = false;
    item.first_round = ranked[i].first_round;
    item.first_round_norm = minmax_norm(item.first_round, min_fr, max_fr);
    item.score = item.first_round;
    out.push_back(item);
  }
  return out;
}

}  // namespace mms
