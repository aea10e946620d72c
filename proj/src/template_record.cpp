#include "mms/template_record.hpp"

#include <nlohmann/json.hpp>

namespace mms {

using nlohmann::json;

bool is_valid_behavior(const std::string& v) {
  return v == "still" || v == "animated" || v == "video";
}

bool is_valid_license(const std::string& v) { return v == "free" || v == "premium"; }

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return days[m - 1];
}

// Howard Hinnant's days_from_civil.
int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return static_cast<int64_t>(era) * 146097 + static_cast<int64_t>(doe) - 719468;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& v = j.at(key);
  if (!v.is_array()) fail(ErrorCode::Parse, std::string("field '") + key + "' must be an array");
  for (const auto& item : v) {
    if (!item.is_string()) {
      fail(ErrorCode::Parse, std::string("field '") + key + "' must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

uint64_t counter(const json& j, const char* key) {
  if (!j.contains(key)) return 0;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) {
    fail(ErrorCode::Parse, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<uint64_t>();
}

}  // namespace

int64_t parse_iso_date_days(const std::string& date) {
  if (date.size() != 10 || date[4] != '-' || date[7] != '-') {
    fail(ErrorCode::Parse, "date '" + date + "' is not YYYY-MM-DD");
  }
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (date[i] < '0' || date[i] > '9') {
      fail(ErrorCode::Parse, "date '" + date + "' is not YYYY-MM-DD");
    }
  }
  int y = std::stoi(date.substr(0, 4));
  int m = std::stoi(date.substr(5, 2));
  int d = std::stoi(date.substr(8, 2));
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) {
    fail(ErrorCode::Parse, "date '" + date + "' is not a valid calendar date");
  }
  return days_from_civil(y, m, d);
}

TemplateRecord parse_template_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::Parse, "template record must be a JSON object");

  TemplateRecord r;
  for (const char* key : {"id", "title", "date"}) {
    if (!j.contains(key) || !j.at(key).is_string() || j.at(key).get<std::string>().empty()) {
      fail(ErrorCode::Parse, std::string("field '") + key + "' is required");
    }
  }
  r.id = j.at("id").get<std::string>();
  r.title = j.at("title").get<std::string>();
  r.date = j.at("date").get<std::string>();
  parse_iso_date_days(r.date);

  r.topics = string_list(j, "topics");
  r.mood = string_list(j, "mood");
  r.style = string_list(j, "style");
  r.intents = string_list(j, "intents");

  if (j.contains("region")) r.region = j.at("region").get<std::string>();
  if (j.contains("language")) r.language = j.at("language").get<std::string>();
  if (j.contains("behavior")) r.behavior = j.at("behavior").get<std::string>();
  if (j.contains("license")) r.license = j.at("license").get<std::string>();
  if (!is_valid_behavior(r.behavior)) {
    fail(ErrorCode::Parse, "field 'behavior': '" + r.behavior + "' is not one of still|animated|video");
  }
  if (!is_valid_license(r.license)) {
    fail(ErrorCode::Parse, "field 'license': '" + r.license + "' is not one of free|premium");
  }

  r.impressions = counter(j, "impressions");
  r.clicks = counter(j, "clicks");
  r.edits = counter(j, "edits");
  r.exports = counter(j, "exports");

  if (j.contains("embeddings")) {
    const auto& embs = j.at("embeddings");
    if (!embs.is_object()) fail(ErrorCode::Parse, "field 'embeddings' must be an object");
    for (const auto& [space, values] : embs.items()) {
      if (!values.is_array()) {
        fail(ErrorCode::Parse, "embedding for space '" + space + "' must be an array");
      }
      std::vector<float> v;
      v.reserve(values.size());
      for (const auto& x : values) {
        if (!x.is_number()) {
          fail(ErrorCode::Parse, "embedding for space '" + space + "' must be numeric");
        }
        v.push_back(x.get<float>());
      }
      r.embeddings[space] = std::move(v);
    }
  }

  if (j.contains("sparse_embedding")) {
    const auto& s = j.at("sparse_embedding");
    if (!s.is_object() || !s.contains("space") || !s.contains("dims") || !s.contains("weights")) {
      fail(ErrorCode::Parse, "field 'sparse_embedding' needs space, dims and weights");
    }
    SparseEmbedding emb;
    emb.space = s.at("space").get<std::string>();
    const auto& dims = s.at("dims");
    const auto& weights = s.at("weights");
    if (!dims.is_array() || !weights.is_array() || dims.size() != weights.size()) {
      fail(ErrorCode::Parse, "sparse_embedding dims and weights must be equal-length arrays");
    }
    for (size_t i = 0; i < dims.size(); ++i) {
      emb.entries.push_back({dims[i].get<uint32_t>(), weights[i].get<double>()});
    }
    r.sparse = std::move(emb);
  }

  return r;
}

std::string template_to_json(const TemplateRecord& r) {
  json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["date"] = r.date;
  if (!r.topics.empty()) j["topics"] = r.topics;
  if (!r.mood.empty()) j["mood"] = r.mood;
  if (!r.style.empty()) j["style"] = r.style;
  if (!r.intents.empty()) j["intents"] = r.intents;
  j["region"] = r.region;
  j["language"] = r.language;
  j["behavior"] = r.behavior;
  j["license"] = r.license;
  j["impressions"] = r.impressions;
  j["clicks"] = r.clicks;
  j["edits"] = r.edits;
  j["exports"] = r.exports;
  if (!r.embeddings.empty()) {
    json embs = json::object();
    for (const auto& [space, values] : r.embeddings) embs[space] = values;
    j["embeddings"] = std::move(embs);
  }
  if (r.sparse) {
    json s;
    s["space"] = r.sparse->space;
    json dims = json::array(), weights = json::array();
    for (const auto& e : r.sparse->entries) {
      dims.push_back(e.dim);
      weights.push_back(e.weight);
    }
    s["dims"] = std::move(dims);
    s["weights"] = std::move(weights);
    j["sparse_embedding"] = std::move(s);
  }
  return j.dump();
}

}  // namespace mms
