#include "mms/sparse_index.hpp"

#include <algorithm>
#include <unordered_map>

namespace mms {

SparseIndex::SparseIndex(std::string space_name, uint32_t sparse_dim)
    : space_(std::move(space_name)), sparse_dim_(sparse_dim) {
  if (space_.empty() || sparse_dim_ == 0) {
    fail(ErrorCode::InvalidArgument, "sparse index needs a space name and a positive sparse_dim");
  }
  postings_.resize(sparse_dim_);
}

void SparseIndex::insert(uint32_t doc_id, const SparseEmbedding& emb) {
  if (frozen_) fail(ErrorCode::State, "sparse index is frozen");
  if (emb.space != space_) {
    fail(ErrorCode::SpaceMismatch,
         "embedding space '" + emb.space + "' does not match index space '" + space_ + "'");
  }
  if (!docs_.insert(doc_id).second) {
    fail(ErrorCode::DuplicateDocument,
         "document " + std::to_string(doc_id) + " already in sparse index");
  }
  for (const auto& entry : emb.entries) {
    if (entry.dim >= sparse_dim_) {
      fail(ErrorCode::InvalidArgument, "sparse dimension out of range for index");
    }
    auto& list = postings_[entry.dim];
    Posting p{doc_id, entry.weight};
    if (list.empty() || list.back().doc_id < doc_id) {
      list.push_back(p);
    } else {
      // Out-of-order insert; keep the list sorted by doc_id.
      auto it = std::lower_bound(list.begin(), list.end(), doc_id,
                                 [](const Posting& a, uint32_t id) { return a.doc_id < id; });
      list.insert(it, p);
    }
  }
}

void SparseIndex::freeze() {
  for (auto& list : postings_) list.shrink_to_fit();
  frozen_ = true;
}

std::vector<SparseMatch> SparseIndex::match(const SparseEmbedding& q, uint32_t min_dims,
                                            size_t limit) const {
  if (q.space != space_) {
    fail(ErrorCode::SpaceMismatch,
         "query space '" + q.space + "' does not match index space '" + space_ + "'");
  }
  if (min_dims == 0) fail(ErrorCode::InvalidArgument, "min_dims must be positive");
  if (limit == 0) fail(ErrorCode::InvalidArgument, "limit must be positive");

  // Accumulate (count, score) per touched document. Query entries are
  // walked in increasing dimension order, so every document's score is the
  // same sum in the same order as a direct sparse_dot.
  std::unordered_map<uint32_t, std::pair<uint32_t, double>> hits;
  for (const auto& entry : q.entries) {
    if (entry.dim >= sparse_dim_) continue;
    for (const auto& posting : postings_[entry.dim]) {
      auto& slot = hits[posting.doc_id];
      slot.first += 1;
      slot.second += entry.weight * posting.weight;
    }
  }

  std::vector<SparseMatch> out;
  out.reserve(hits.size());
  for (const auto& [doc, cs] : hits) {
    if (cs.first >= min_dims) out.push_back({doc, cs.first, cs.second});
  }
  std::sort(out.begin(), out.end(), [](const SparseMatch& a, const SparseMatch& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

void SparseIndex::save(ByteWriter& w) const {
  w.put_string(space_);
  w.put_u32(sparse_dim_);

  std::vector<uint32_t> docs(docs_.begin(), docs_.end());
  std::sort(docs.begin(), docs.end());
  w.put_u64(docs.size());
  for (uint32_t d : docs) w.put_u32(d);

  uint64_t nonempty = 0;
  for (const auto& list : postings_) nonempty += list.empty() ? 0 : 1;
  w.put_u64(nonempty);
  for (uint32_t dim = 0; dim < sparse_dim_; ++dim) {
    const auto& list = postings_[dim];
    if (list.empty()) continue;
    w.put_u32(dim);
    w.put_u64(list.size());
    for (const auto& p : list) {
      w.put_u32(p.doc_id);
      w.put_f64(p.weight);
    }
  }
}

SparseIndex SparseIndex::load(ByteReader& r) {
  std::string space = r.get_string();
  uint32_t sparse_dim = r.get_u32();
  SparseIndex idx(space, sparse_dim);

  uint64_t n_docs = r.get_u64();
  for (uint64_t i = 0; i < n_docs; ++i) idx.docs_.insert(r.get_u32());

  uint64_t nonempty = r.get_u64();
  for (uint64_t i = 0; i < nonempty; ++i) {
    uint32_t dim = r.get_u32();
    if (dim >= sparse_dim) fail(ErrorCode::CorruptSnapshot, "posting dimension out of range");
    uint64_t count = r.get_u64();
    auto& list = idx.postings_[dim];
    list.reserve(count);
    uint32_t prev = 0;
    for (uint64_t k = 0; k < count; ++k) {
      uint32_t doc = r.get_u32();
      double weight = r.get_f64();
      if (k > 0 && doc <= prev) fail(ErrorCode::CorruptSnapshot, "posting list not sorted");
      prev = doc;
      list.push_back({doc, weight});
    }
  }
  idx.freeze();
  return idx;
}

}  // namespace mms
