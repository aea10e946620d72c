#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mms/embedding.hpp"

namespace mms {

// One indexed document as it appears in the corpus file (one JSON object
// per line). Embeddings are optional; missing ones are generated at
// ingestion from title+topics by the deterministic fallback embedder.
struct TemplateRecord {
  std::string id;
  std::string title;
  std::vector<std::string> topics;
  std::vector<std::string> mood;
  std::vector<std::string> style;
  std::string region = "all";
  std::string language = "en-US";
  std::string date;  // ISO 8601 calendar date, e.g. 2023-12-12
  std::string behavior = "still";
  std::string license = "free";
  std::vector<std::string> intents;
  std::map<std::string, std::vector<float>> embeddings;  // space name -> dense values
  std::optional<SparseEmbedding> sparse;
  uint64_t impressions = 0;
  uint64_t clicks = 0;
  uint64_t edits = 0;
  uint64_t exports = 0;
};

bool is_valid_behavior(const std::string& v);
bool is_valid_license(const std::string& v);

// Strict YYYY-MM-DD to days since 1970-01-01 (proleptic Gregorian).
int64_t parse_iso_date_days(const std::string& date);

TemplateRecord parse_template_json(const std::string& line);
std::string template_to_json(const TemplateRecord& record);

}  // namespace mms
