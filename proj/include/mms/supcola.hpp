#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mms/common.hpp"

namespace mms {

enum class ViewKind : uint8_t { Image = 0, Text = 1, Label = 2 };
const char* view_kind_name(ViewKind k);
ViewKind view_kind_from_name(const std::string& name);

// One view of a sample: an L2-normalized embedding for the image, text or
// label modality, carrying the sample's label set.
struct ViewEmbedding {
  uint32_t sample_index = 0;
  ViewKind kind = ViewKind::Image;
  std::vector<double> z;
  std::vector<std::string> labels;
};

struct SupColaBatch {
  std::vector<ViewEmbedding> views;

  // Structural checks: >= 2 views, every view labeled, equal dimensions,
  // finite values. Norms are not enforced here so perturbed batches can
  // still be evaluated.
  void validate() const;
  void validate_normalized(double tol = 1e-6) const;
};

struct LossConfig {
  double temperature = 0.07;

  void validate() const;
};

// Label-aligned supervised contrastive loss over a multi-view, multi-label
// batch. For anchor view i with A(i) = all other views and P(i) = views in
// A(i) sharing at least one label with i:
//
//   L = sum_i -(1/|P(i)|) sum_{p in P(i)} sum_{v in j(p)}
//         log( exp(z_i.z_v / tau) / sum_{n in A(i)} exp(z_i.z_n / tau) )
//
// where j(p) is the set of views of p's sample that share a label with i,
// excluding i itself. Anchors with empty P(i) contribute zero. Softmax
// normalizers use max-subtraction.
double supcola_loss(const SupColaBatch& batch, const LossConfig& cfg);

// Analytic gradient of supcola_loss with respect to every view embedding,
// treating the vectors as free (no normalization constraint).
std::vector<std::vector<double>> supcola_grad(const SupColaBatch& batch, const LossConfig& cfg);

struct AlignTrace {
  // loss[t] is the loss before step t; the final entry is the loss after
  // the last step, so size() == steps + 1.
  std::vector<double> loss;
  SupColaBatch batch;
};

// Plain gradient descent on the batch embeddings with re-normalization
// after each step.
AlignTrace align_toy(SupColaBatch batch, const LossConfig& cfg, size_t steps, double learning_rate);

// Line format: sample_index <TAB> kind <TAB> label1|label2 <TAB> v1 v2 ...
// Values are printed with enough digits to round-trip exactly.
SupColaBatch read_batch_file(const std::string& path);
void write_batch_file(const SupColaBatch& batch, const std::string& path);

}  // namespace mms
