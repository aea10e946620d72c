#include "mms/keyword_index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mms {

const char* text_field_name(TextField f) {
  switch (f) {
    case TextField::Title: return "title";
    case TextField::Topics: return "topics";
    case TextField::Mood: return "mood";
    case TextField::Style: return "style";
  }
  return "unknown";
}

void FieldBoosts::validate() const {
  for (size_t i = 0; i < kTextFieldCount; ++i) {
    if (!(boost[i] > 0.0)) {
      fail(ErrorCode::Config, std::string("boost for field '") +
                                  text_field_name(static_cast<TextField>(i)) +
                                  "' must be positive");
    }
  }
}

KeywordIndex::KeywordIndex(Bm25Params params, FieldBoosts boosts)
    : params_(params), boosts_(boosts) {
  if (!(params_.k1 >= 0.0) || !(params_.b >= 0.0) || params_.b > 1.0) {
    fail(ErrorCode::Config, "bm25 requires k1 >= 0 and b in [0, 1]");
  }
  boosts_.validate();
}

void KeywordIndex::insert(uint32_t doc_id,
                          const std::array<std::vector<std::string>, kTextFieldCount>& field_tokens,
                          const DocAttributes& attrs) {
  if (frozen_) fail(ErrorCode::State, "keyword index is frozen");
  if (doc_id < attrs_.size()) {
    fail(ErrorCode::DuplicateDocument,
         "document " + std::to_string(doc_id) + " already in keyword index");
  }
  if (doc_id != attrs_.size()) {
    fail(ErrorCode::InvalidArgument, "keyword index documents must be inserted in ordinal order");
  }
  attrs_.push_back(attrs);

  for (size_t f = 0; f < kTextFieldCount; ++f) {
    auto& fs = fields_[f];
    const auto& tokens = field_tokens[f];
    fs.doc_len.push_back(static_cast<uint32_t>(tokens.size()));
    fs.total_len += tokens.size();

    std::map<std::string, uint32_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (const auto& [token, count] : tf) {
      fs.postings[token].push_back({doc_id, count});
    }
  }
}

void KeywordIndex::freeze() { frozen_ = true; }

double KeywordIndex::idf(const FieldStats& fs, size_t df) const {
  double n = static_cast<double>(attrs_.size());
  return std::log(1.0 + (n - static_cast<double>(df) + 0.5) / (static_cast<double>(df) + 0.5));
}

std::vector<KeywordMatch> KeywordIndex::match(const std::vector<std::string>& query_tokens,
                                              const FilterSpec& filters, size_t limit) const {
  if (query_tokens.empty()) fail(ErrorCode::InvalidArgument, "kw_match requires query tokens");
  if (limit == 0) fail(ErrorCode::InvalidArgument, "limit must be positive");

  // Distinct tokens in first-occurrence order keep accumulation reproducible.
  std::vector<std::string> distinct;
  for (const auto& t : query_tokens) {
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) distinct.push_back(t);
  }

  std::unordered_map<uint32_t, double> scores;
  for (const auto& token : distinct) {
    for (size_t f = 0; f < kTextFieldCount; ++f) {
      const auto& fs = fields_[f];
      auto it = fs.postings.find(token);
      if (it == fs.postings.end()) continue;
      const auto& list = it->second;
      double idf_t = idf(fs, list.size());
      double avg = fs.doc_len.empty()
                       ? 0.0
                       : static_cast<double>(fs.total_len) / static_cast<double>(fs.doc_len.size());
      for (const auto& p : list) {
        double tf = static_cast<double>(p.tf);
        double norm_len = avg > 0.0 ? static_cast<double>(fs.doc_len[p.doc_id]) / avg : 0.0;
        double denom = tf + params_.k1 * (1.0 - params_.b + params_.b * norm_len);
        scores[p.doc_id] += boosts_.boost[f] * idf_t * tf * (params_.k1 + 1.0) / denom;
      }
    }
  }

  std::vector<KeywordMatch> out;
  out.reserve(scores.size());
  for (const auto& [doc, score] : scores) {
    if (passes(doc, filters)) out.push_back({doc, score});
  }
  std::sort(out.begin(), out.end(), [](const KeywordMatch& a, const KeywordMatch& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

bool KeywordIndex::passes(uint32_t doc_id, const FilterSpec& filters) const {
  const DocAttributes& a = attributes(doc_id);
  if (filters.language && a.language != *filters.language) return false;
  if (filters.region && a.region != "all" && a.region != *filters.region) return false;
  if (filters.behavior && a.behavior != *filters.behavior) return false;
  if (filters.license && a.license != *filters.license) return false;
  return true;
}

const DocAttributes& KeywordIndex::attributes(uint32_t doc_id) const {
  if (doc_id >= attrs_.size()) fail(ErrorCode::InvalidArgument, "unknown document ordinal");
  return attrs_[doc_id];
}

void KeywordIndex::save(ByteWriter& w) const {
  w.put_f64(params_.k1);
  w.put_f64(params_.b);
  for (double b : boosts_.boost) w.put_f64(b);

  w.put_u64(attrs_.size());
  for (const auto& a : attrs_) {
    w.put_string(a.language);
    w.put_string(a.region);
    w.put_string(a.behavior);
    w.put_string(a.license);
  }

  for (const auto& fs : fields_) {
    w.put_u64(fs.total_len);
    w.put_u64(fs.doc_len.size());
    for (uint32_t len : fs.doc_len) w.put_u32(len);
    w.put_u64(fs.postings.size());
    for (const auto& [token, list] : fs.postings) {
      w.put_string(token);
      w.put_u64(list.size());
      for (const auto& p : list) {
        w.put_u32(p.doc_id);
        w.put_u32(p.tf);
      }
    }
  }
}

KeywordIndex KeywordIndex::load(ByteReader& r) {
  Bm25Params params;
  params.k1 = r.get_f64();
  params.b = r.get_f64();
  FieldBoosts boosts;
  for (double& b : boosts.boost) b = r.get_f64();

  KeywordIndex idx(params, boosts);
  uint64_t n_docs = r.get_u64();
  idx.attrs_.reserve(n_docs);
  for (uint64_t i = 0; i < n_docs; ++i) {
    DocAttributes a;
    a.language = r.get_string();
    a.region = r.get_string();
    a.behavior = r.get_string();
    a.license = r.get_string();
    idx.attrs_.push_back(std::move(a));
  }

  for (auto& fs : idx.fields_) {
    fs.total_len = r.get_u64();
    uint64_t n_len = r.get_u64();
    if (n_len != n_docs) fail(ErrorCode::CorruptSnapshot, "field length table size mismatch");
    fs.doc_len.reserve(n_len);
    for (uint64_t i = 0; i < n_len; ++i) fs.doc_len.push_back(r.get_u32());
    uint64_t n_tokens = r.get_u64();
    for (uint64_t i = 0; i < n_tokens; ++i) {
      std::string token = r.get_string();
      uint64_t n_postings = r.get_u64();
      auto& list = fs.postings[token];
      list.reserve(n_postings);
      for (uint64_t k = 0; k < n_postings; ++k) {
        uint32_t doc = r.get_u32();
        uint32_t tf = r.get_u32();
        if (doc >= n_docs) fail(ErrorCode::CorruptSnapshot, "posting doc out of range");
        list.push_back({doc, tf});
      }
    }
  }
  idx.freeze();
  return idx;
}

}  // namespace mms
