#include "mms/config.hpp"

#include <nlohmann/json.hpp>

#include "mms/template_record.hpp"

namespace mms {

using nlohmann::json;

EngineConfig EngineConfig::defaults() {
  EngineConfig cfg;
  cfg.spaces = {
      {"text_image", 2048, 8192, 0x5eedfacecafe01ULL, 16},
      {"intent", 2048, 8192, 0x5eedfacecafe02ULL, 16},
  };
  return cfg;
}

const EmbeddingSpace& EngineConfig::space(const std::string& name) const {
  for (const auto& s : spaces) {
    if (s.name == name) return s;
  }
  fail(ErrorCode::Config, "embedding space '" + name + "' is not in the catalog");
}

void EngineConfig::validate() const {
  if (spaces.empty()) fail(ErrorCode::Config, "at least one embedding space is required");
  for (size_t i = 0; i < spaces.size(); ++i) {
    spaces[i].validate();
    for (size_t k = i + 1; k < spaces.size(); ++k) {
      if (spaces[i].name == spaces[k].name) {
        fail(ErrorCode::Config, "duplicate embedding space '" + spaces[i].name + "'");
      }
    }
  }
  space(primary_space);
  space(intent_space);
  boosts.validate();
  if (!(bm25.k1 >= 0.0) || !(bm25.b >= 0.0) || bm25.b > 1.0) {
    fail(ErrorCode::Config, "bm25 requires k1 >= 0 and b in [0, 1]");
  }
  if (min_dims == 0) fail(ErrorCode::Config, "min_dims must be positive");
  first_round.validate();
  rescore.validate();
  if (long_query_min_words == 0) fail(ErrorCode::Config, "long_query_min_words must be positive");
  if (page_size == 0) fail(ErrorCode::Config, "page_size must be positive");
  if (!reference_date.empty()) parse_iso_date_days(reference_date);
}

EngineConfig EngineConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::Parse, "config must be a JSON object");

  EngineConfig cfg = defaults();
  try {
    if (j.contains("spaces")) {
      cfg.spaces.clear();
      for (const auto& s : j.at("spaces")) {
        EmbeddingSpace space;
        space.name = s.at("name").get<std::string>();
        if (s.contains("dense_dim")) space.dense_dim = s.at("dense_dim").get<uint32_t>();
        if (s.contains("sparse_dim")) space.sparse_dim = s.at("sparse_dim").get<uint32_t>();
        if (s.contains("sparsifier_seed")) {
          space.sparsifier_seed = s.at("sparsifier_seed").get<uint64_t>();
        }
        if (s.contains("sparsifier_top_k")) {
          space.sparsifier_top_k = s.at("sparsifier_top_k").get<uint32_t>();
        }
        cfg.spaces.push_back(std::move(space));
      }
    }
    if (j.contains("primary_space")) cfg.primary_space = j.at("primary_space").get<std::string>();
    if (j.contains("intent_space")) cfg.intent_space = j.at("intent_space").get<std::string>();

    if (j.contains("keyword")) {
      const auto& kw = j.at("keyword");
      if (kw.contains("k1")) cfg.bm25.k1 = kw.at("k1").get<double>();
      if (kw.contains("b")) cfg.bm25.b = kw.at("b").get<double>();
      if (kw.contains("boosts")) {
        const auto& boosts = kw.at("boosts");
        for (size_t f = 0; f < kTextFieldCount; ++f) {
          const char* name = text_field_name(static_cast<TextField>(f));
          if (boosts.contains(name)) cfg.boosts.boost[f] = boosts.at(name).get<double>();
        }
      }
      if (kw.contains("recall_limit")) {
        cfg.keyword_recall_limit = kw.at("recall_limit").get<size_t>();
      }
    }
    if (j.contains("sparse")) {
      const auto& sp = j.at("sparse");
      if (sp.contains("min_dims")) cfg.min_dims = sp.at("min_dims").get<uint32_t>();
      if (sp.contains("recall_limit")) cfg.sparse_recall_limit = sp.at("recall_limit").get<size_t>();
    }
    if (j.contains("first_round")) {
      const auto& fr = j.at("first_round");
      if (fr.contains("w_bm25")) cfg.first_round.w_bm25 = fr.at("w_bm25").get<double>();
      if (fr.contains("w_recency")) cfg.first_round.w_recency = fr.at("w_recency").get<double>();
      if (fr.contains("w_locale")) cfg.first_round.w_locale = fr.at("w_locale").get<double>();
      if (fr.contains("w_behavior")) cfg.first_round.w_behavior = fr.at("w_behavior").get<double>();
      if (fr.contains("recency_half_life_days")) {
        cfg.first_round.recency_half_life_days = fr.at("recency_half_life_days").get<double>();
      }
      if (fr.contains("sparse_only_demotion")) {
        cfg.first_round.sparse_only_demotion = fr.at("sparse_only_demotion").get<double>();
      }
    }
    if (j.contains("rescore")) {
      const auto& rs = j.at("rescore");
      if (rs.contains("depth")) cfg.rescore.depth = rs.at("depth").get<size_t>();
      if (rs.contains("embed_weight")) cfg.rescore.embed_weight = rs.at("embed_weight").get<double>();
      if (rs.contains("long_query_intent_weight")) {
        cfg.rescore.long_query_intent_weight = rs.at("long_query_intent_weight").get<double>();
      }
    }
    if (j.contains("long_query_min_words")) {
      cfg.long_query_min_words = j.at("long_query_min_words").get<uint32_t>();
    }
    if (j.contains("long_hybrid_union")) {
      cfg.long_hybrid_union = j.at("long_hybrid_union").get<bool>();
    }
    if (j.contains("recovery_enabled")) cfg.recovery_enabled = j.at("recovery_enabled").get<bool>();
    if (j.contains("page_size")) cfg.page_size = j.at("page_size").get<uint32_t>();
    if (j.contains("reference_date")) cfg.reference_date = j.at("reference_date").get<std::string>();
    if (j.contains("intent_graph_path")) {
      cfg.intent_graph_path = j.at("intent_graph_path").get<std::string>();
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid config value: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

std::string EngineConfig::to_json_text() const {
  json j;
  json spaces_json = json::array();
  for (const auto& s : spaces) {
    spaces_json.push_back({{"name", s.name},
                           {"dense_dim", s.dense_dim},
                           {"sparse_dim", s.sparse_dim},
                           {"sparsifier_seed", s.sparsifier_seed},
                           {"sparsifier_top_k", s.sparsifier_top_k}});
  }
  j["spaces"] = std::move(spaces_json);
  j["primary_space"] = primary_space;
  j["intent_space"] = intent_space;
  j["keyword"] = {{"k1", bm25.k1},
                  {"b", bm25.b},
                  {"boosts",
                   {{"title", boosts.boost[0]},
                    {"topics", boosts.boost[1]},
                    {"mood", boosts.boost[2]},
                    {"style", boosts.boost[3]}}},
                  {"recall_limit", keyword_recall_limit}};
  j["sparse"] = {{"min_dims", min_dims}, {"recall_limit", sparse_recall_limit}};
  j["first_round"] = {{"w_bm25", first_round.w_bm25},
                      {"w_recency", first_round.w_recency},
                      {"w_locale", first_round.w_locale},
                      {"w_behavior", first_round.w_behavior},
                      {"recency_half_life_days", first_round.recency_half_life_days},
                      {"sparse_only_demotion", first_round.sparse_only_demotion}};
  j["rescore"] = {{"depth", rescore.depth},
                  {"embed_weight", rescore.embed_weight},
                  {"long_query_intent_weight", rescore.long_query_intent_weight}};
  j["long_query_min_words"] = long_query_min_words;
  j["long_hybrid_union"] = long_hybrid_union;
  j["recovery_enabled"] = recovery_enabled;
  j["page_size"] = page_size;
  j["reference_date"] = reference_date;
  j["intent_graph_path"] = intent_graph_path;
  return j.dump();
}

}  // namespace mms
