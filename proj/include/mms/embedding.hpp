#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mms/common.hpp"

namespace mms {

// A named embedding space. Dense vectors live in dense_dim dimensions;
// the derived sparse form lives in a larger sparse_dim grid with at most
// sparsifier_top_k positive entries.
struct EmbeddingSpace {
  std::string name;
  uint32_t dense_dim = 2048;
  uint32_t sparse_dim = 8192;
  uint64_t sparsifier_seed = 0;
  uint32_t sparsifier_top_k = 16;

  void validate() const;
};

struct DenseEmbedding {
  std::string space;
  std::vector<float> values;
};

struct SparseEntry {
  uint32_t dim = 0;
  double weight = 0.0;
};

// Entries sorted by strictly increasing dimension index, weights > 0.
struct SparseEmbedding {
  std::string space;
  std::vector<SparseEntry> entries;
};

void validate_dense(const DenseEmbedding& e, const EmbeddingSpace& space);
void validate_sparse(const SparseEmbedding& e, const EmbeddingSpace& space);

// dot(a,b) / (|a||b|), accumulated in double. Throws SpaceMismatch for
// different spaces or lengths, ZeroVector when either norm is zero.
double cosine(const DenseEmbedding& a, const DenseEmbedding& b);

// In-place L2 normalization; throws ZeroVector on an all-zero vector.
void l2_normalize(std::vector<float>& values);

struct SparseDotResult {
  uint32_t matched_dims = 0;
  double score = 0.0;
};

// Count of shared dimensions and the sum of weight products over them.
// Accumulates in increasing-dimension order so scores are reproducible.
SparseDotResult sparse_dot(const SparseEmbedding& a, const SparseEmbedding& b);

// Deterministic sparsifier: a seeded sparse Rademacher projection from
// dense_dim to sparse_dim, rectification, then the top_k surviving rows
// by magnitude. Each dense coordinate scatters into kSlotsPerDim target
// rows with a hashed sign, so one sparsify costs dense_dim * kSlotsPerDim
// accumulations rather than a full matrix multiply. The implied projection
// matrix entry is the sum of slot contributions and can be materialized
// via column_slot for verification.
class Sparsifier {
 public:
  static constexpr uint32_t kSlotsPerDim = 16;

  struct Slot {
    uint32_t row;
    double sign;  // +1 or -1
  };

  explicit Sparsifier(EmbeddingSpace space);

  // Slot `slot` of dense coordinate `dense_index`: target row and sign.
  // This is the definition of the projection matrix; both the fast scatter
  // path and any materialized-matrix check derive from it.
  static Slot column_slot(const EmbeddingSpace& space, uint32_t dense_index, uint32_t slot);

  SparseEmbedding sparsify(const DenseEmbedding& dense) const;

  const EmbeddingSpace& space() const { return space_; }

 private:
  EmbeddingSpace space_;
};

// Deterministic stand-in for a neural text encoder: normalized tokens are
// hashed into dense coordinates with signed unit contributions, then the
// vector is L2-normalized. Equal normalized texts give bitwise-equal
// vectors; shared tokens add aligned mass. The per-space hash seed is
// derived from the space name so distinct spaces act as distinct models.
DenseEmbedding toy_embed(std::string_view text, const EmbeddingSpace& space);

}  // namespace mms
