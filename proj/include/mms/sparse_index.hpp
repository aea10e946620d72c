#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "mms/embedding.hpp"
#include "mms/serialize.hpp"

namespace mms {

struct SparseMatch {
  uint32_t doc_id = 0;
  uint32_t matched_dims = 0;
  double score = 0.0;
};

// Inverted index over sparse-embedding dimensions. Build is single-writer;
// freeze() seals the index for unrestricted concurrent readers. Retrieval
// keeps documents sharing at least min_dims dimensions with the query and
// scores them by the weighted dot over the shared dimensions.
class SparseIndex {
 public:
  SparseIndex() = default;
  SparseIndex(std::string space_name, uint32_t sparse_dim);

  void insert(uint32_t doc_id, const SparseEmbedding& emb);
  void freeze();
  bool frozen() const { return frozen_; }

  // Results sorted by score descending, ties by ascending doc_id, truncated
  // to `limit`. min_dims and limit must be positive.
  std::vector<SparseMatch> match(const SparseEmbedding& q, uint32_t min_dims, size_t limit) const;

  size_t doc_count() const { return docs_.size(); }
  const std::string& space() const { return space_; }

  void save(ByteWriter& w) const;
  static SparseIndex load(ByteReader& r);

 private:
  struct Posting {
    uint32_t doc_id;
    double weight;
  };

  std::string space_;
  uint32_t sparse_dim_ = 0;
  std::vector<std::vector<Posting>> postings_;  // one list per dimension
  std::unordered_set<uint32_t> docs_;
  bool frozen_ = false;
};

}  // namespace mms
