#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mms/serialize.hpp"

namespace mms {

// Searchable text fields, in fixed scoring order.
enum class TextField : uint8_t { Title = 0, Topics = 1, Mood = 2, Style = 3 };
constexpr size_t kTextFieldCount = 4;
const char* text_field_name(TextField f);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct FieldBoosts {
  std::array<double, kTextFieldCount> boost = {2.0, 1.5, 1.0, 1.0};

  double& operator[](TextField f) { return boost[static_cast<size_t>(f)]; }
  double operator[](TextField f) const { return boost[static_cast<size_t>(f)]; }
  void validate() const;
};

// Hard constraints over template metadata. Unset fields match everything.
// A document with region "all" satisfies any region constraint.
struct FilterSpec {
  std::optional<std::string> language;
  std::optional<std::string> region;
  std::optional<std::string> behavior;
  std::optional<std::string> license;

  bool empty() const { return !language && !region && !behavior && !license; }
};

struct DocAttributes {
  std::string language;
  std::string region;
  std::string behavior;
  std::string license;
};

struct KeywordMatch {
  uint32_t doc_id = 0;
  double score = 0.0;
};

// Keyword recall with per-field BM25 and hard metadata filters.
//
// Scoring: for each distinct query token t and field f containing it,
//   idf_f(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
//   contribution = boost_f * idf_f(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len/avglen_f))
// summed per document. Repeated query tokens count once. Ties break by
// ascending doc_id.
class KeywordIndex {
 public:
  KeywordIndex() = default;
  KeywordIndex(Bm25Params params, FieldBoosts boosts);

  void insert(uint32_t doc_id, const std::array<std::vector<std::string>, kTextFieldCount>& field_tokens,
              const DocAttributes& attrs);
  void freeze();
  bool frozen() const { return frozen_; }

  std::vector<KeywordMatch> match(const std::vector<std::string>& query_tokens,
                                  const FilterSpec& filters, size_t limit) const;

  // Filter check shared with the other recall paths.
  bool passes(uint32_t doc_id, const FilterSpec& filters) const;
  const DocAttributes& attributes(uint32_t doc_id) const;

  size_t doc_count() const { return attrs_.size(); }

  void save(ByteWriter& w) const;
  static KeywordIndex load(ByteReader& r);

 private:
  struct Posting {
    uint32_t doc_id;
    uint32_t tf;
  };
  struct FieldStats {
    std::map<std::string, std::vector<Posting>> postings;
    std::vector<uint32_t> doc_len;  // indexed by doc ordinal
    uint64_t total_len = 0;
  };

  double idf(const FieldStats& fs, size_t df) const;

  Bm25Params params_;
  FieldBoosts boosts_;
  std::array<FieldStats, kTextFieldCount> fields_;
  std::vector<DocAttributes> attrs_;  // doc_id is the ordinal index
  bool frozen_ = false;
};

}  // namespace mms
