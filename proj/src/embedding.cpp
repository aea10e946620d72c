#include "mms/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "mms/text.hpp"

namespace mms {

void EmbeddingSpace::validate() const {
  if (name.empty()) fail(ErrorCode::Config, "embedding space name must be non-empty");
  if (dense_dim == 0) fail(ErrorCode::Config, "space '" + name + "': dense_dim must be positive");
  if (sparse_dim < dense_dim) {
    fail(ErrorCode::Config, "space '" + name + "': sparse_dim must be >= dense_dim");
  }
  if (sparsifier_top_k == 0 || sparsifier_top_k > sparse_dim) {
    fail(ErrorCode::Config, "space '" + name + "': sparsifier_top_k must be in [1, sparse_dim]");
  }
}

void validate_dense(const DenseEmbedding& e, const EmbeddingSpace& space) {
  if (e.space != space.name) {
    fail(ErrorCode::SpaceMismatch,
         "dense embedding space '" + e.space + "' does not match '" + space.name + "'");
  }
  if (e.values.size() != space.dense_dim) {
    fail(ErrorCode::InvalidArgument, "dense embedding length " + std::to_string(e.values.size()) +
                                         " != dense_dim " + std::to_string(space.dense_dim));
  }
  for (float v : e.values) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "dense embedding has non-finite value");
  }
}

void validate_sparse(const SparseEmbedding& e, const EmbeddingSpace& space) {
  if (e.space != space.name) {
    fail(ErrorCode::SpaceMismatch,
         "sparse embedding space '" + e.space + "' does not match '" + space.name + "'");
  }
  if (e.entries.size() > space.sparsifier_top_k) {
    fail(ErrorCode::InvalidArgument, "sparse embedding has more than top_k entries");
  }
  uint32_t prev = 0;
  bool first = true;
  for (const auto& entry : e.entries) {
    if (entry.dim >= space.sparse_dim) {
      fail(ErrorCode::InvalidArgument, "sparse dimension index out of range");
    }
    if (!first && entry.dim <= prev) {
      fail(ErrorCode::InvalidArgument, "sparse dimension indices must be strictly increasing");
    }
    if (!(entry.weight > 0.0) || !std::isfinite(entry.weight)) {
      fail(ErrorCode::InvalidArgument, "sparse weights must be positive and finite");
    }
    prev = entry.dim;
    first = false;
  }
}

double cosine(const DenseEmbedding& a, const DenseEmbedding& b) {
  if (a.space != b.space) {
    fail(ErrorCode::SpaceMismatch, "cosine across spaces '" + a.space + "' and '" + b.space + "'");
  }
  if (a.values.size() != b.values.size()) {
    fail(ErrorCode::SpaceMismatch, "cosine over vectors of different lengths");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    double x = a.values[i], y = b.values[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::ZeroVector, "cosine of a zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void l2_normalize(std::vector<float>& values) {
  double sum = 0.0;
  for (float v : values) sum += static_cast<double>(v) * static_cast<double>(v);
  if (sum == 0.0) fail(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  double inv = 1.0 / std::sqrt(sum);
  for (float& v : values) v = static_cast<float>(v * inv);
}

SparseDotResult sparse_dot(const SparseEmbedding& a, const SparseEmbedding& b) {
  if (a.space != b.space) {
    fail(ErrorCode::SpaceMismatch,
         "sparse_dot across spaces '" + a.space + "' and '" + b.space + "'");
  }
  SparseDotResult r;
  size_t i = 0, j = 0;
  while (i < a.entries.size() && j < b.entries.size()) {
    uint32_t da = a.entries[i].dim, db = b.entries[j].dim;
    if (da < db) {
      ++i;
    } else if (db < da) {
      ++j;
    } else {
      r.score += a.entries[i].weight * b.entries[j].weight;
      ++r.matched_dims;
      ++i;
      ++j;
    }
  }
  return r;
}

Sparsifier::Sparsifier(EmbeddingSpace space) : space_(std::move(space)) {
  space_.validate();
}

Sparsifier::Slot Sparsifier::column_slot(const EmbeddingSpace& space, uint32_t dense_index,
                                         uint32_t slot) {
  uint64_t h = splitmix64(splitmix64(space.sparsifier_seed + dense_index) + slot);
  Slot s;
  s.row = static_cast<uint32_t>(h % space.sparse_dim);
  s.sign = (h >> 63) ? 1.0 : -1.0;
  return s;
}

SparseEmbedding Sparsifier::sparsify(const DenseEmbedding& dense) const {
  validate_dense(dense, space_);

  std::vector<double> acc(space_.sparse_dim, 0.0);
  bool any = false;
  for (uint32_t i = 0; i < space_.dense_dim; ++i) {
    double v = dense.values[i];
    if (v == 0.0) continue;
    any = true;
    for (uint32_t s = 0; s < kSlotsPerDim; ++s) {
      Slot slot = column_slot(space_, i, s);
      acc[slot.row] += slot.sign * v;
    }
  }
  if (!any) fail(ErrorCode::ZeroVector, "cannot sparsify a zero vector");

  // Rectify, then keep the top_k positive rows by magnitude (row index
  // breaks exact ties).
  std::vector<SparseEntry> positive;
  for (uint32_t row = 0; row < space_.sparse_dim; ++row) {
    if (acc[row] > 0.0) positive.push_back({row, acc[row]});
  }
  size_t keep = std::min<size_t>(space_.sparsifier_top_k, positive.size());
  std::partial_sort(positive.begin(), positive.begin() + keep, positive.end(),
                    [](const SparseEntry& a, const SparseEntry& b) {
                      if (a.weight != b.weight) return a.weight > b.weight;
                      return a.dim < b.dim;
                    });
  positive.resize(keep);
  std::sort(positive.begin(), positive.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.dim < b.dim; });

  SparseEmbedding out;
  out.space = space_.name;
  out.entries = std::move(positive);
  return out;
}

DenseEmbedding toy_embed(std::string_view text, const EmbeddingSpace& space) {
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) fail(ErrorCode::EmptyText, "toy_embed: text is empty after normalization");

  constexpr uint32_t kSlotsPerToken = 8;
  const uint64_t space_seed = splitmix64(fnv1a64(space.name));

  std::vector<float> values(space.dense_dim, 0.0f);
  std::vector<double> acc(space.dense_dim, 0.0);
  for (const auto& token : tokens) {
    uint64_t tok = splitmix64(space_seed ^ fnv1a64(token));
    for (uint32_t s = 0; s < kSlotsPerToken; ++s) {
      uint64_t h = splitmix64(tok + s);
      uint32_t coord = static_cast<uint32_t>(h % space.dense_dim);
      acc[coord] += (h >> 63) ? 1.0 : -1.0;
    }
  }

  double sum = 0.0;
  for (double v : acc) sum += v * v;
  if (sum == 0.0) {
    // Pathological full cancellation across tokens; pin one deterministic
    // coordinate so the embedding still has a direction.
    uint64_t h = splitmix64(space_seed ^ fnv1a64(join_tokens(tokens)));
    acc[h % space.dense_dim] = 1.0;
    sum = 1.0;
  }
  double inv = 1.0 / std::sqrt(sum);
  for (uint32_t i = 0; i < space.dense_dim; ++i) {
    values[i] = static_cast<float>(acc[i] * inv);
  }

  DenseEmbedding out;
  out.space = space.name;
  out.values = std::move(values);
  return out;
}

}  // namespace mms
