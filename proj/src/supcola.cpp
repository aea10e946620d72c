#include "mms/supcola.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace mms {

const char* view_kind_name(ViewKind k) {
  switch (k) {
    case ViewKind::Image: return "image";
    case ViewKind::Text: return "text";
    case ViewKind::Label: return "label";
  }
  return "unknown";
}

ViewKind view_kind_from_name(const std::string& name) {
  if (name == "image") return ViewKind::Image;
  if (name == "text") return ViewKind::Text;
  if (name == "label") return ViewKind::Label;
  fail(ErrorCode::Parse, "unknown view kind '" + name + "'");
}

void SupColaBatch::validate() const {
  if (views.size() < 2) fail(ErrorCode::DegenerateBatch, "batch needs at least 2 views");
  size_t dim = views.front().z.size();
  if (dim == 0) fail(ErrorCode::DegenerateBatch, "views must have a positive dimension");
  for (const auto& v : views) {
    if (v.z.size() != dim) fail(ErrorCode::DegenerateBatch, "views have mismatched dimensions");
    if (v.labels.empty()) fail(ErrorCode::DegenerateBatch, "every view needs at least one label");
    for (double x : v.z) {
      if (!std::isfinite(x)) fail(ErrorCode::DegenerateBatch, "view embedding has non-finite value");
    }
  }
}

void SupColaBatch::validate_normalized(double tol) const {
  validate();
  for (const auto& v : views) {
    double norm = 0.0;
    for (double x : v.z) norm += x * x;
    norm = std::sqrt(norm);
    if (std::abs(norm - 1.0) > tol) {
      fail(ErrorCode::InvalidArgument, "view embedding is not L2-normalized");
    }
  }
}

void LossConfig::validate() const {
  if (!(temperature > 0.0)) fail(ErrorCode::InvalidArgument, "temperature must be positive");
}

namespace {

bool share_label(const ViewEmbedding& a, const ViewEmbedding& b) {
  for (const auto& la : a.labels) {
    for (const auto& lb : b.labels) {
      if (la == lb) return true;
    }
  }
  return false;
}

struct AnchorTerms {
  // positives[v] for v in P(i); multiplicity k_s collapses the inner
  // sum over p: sum_{p in P(i)} sum_{v in j(p)} f(v)
  //           == sum_{v in P(i)} k_{sample(v)} * f(v)
  // where k_s is the number of views of sample s inside P(i).
  std::vector<std::pair<size_t, double>> positives;  // (view index, multiplicity)
  double inv_p = 0.0;                                // 1 / |P(i)|
  double mult_total = 0.0;                           // sum of multiplicities
};

// Shared geometry of the loss for one anchor. Returns false when P(i) is
// empty (the anchor contributes nothing).
bool anchor_terms(const SupColaBatch& batch, size_t i, AnchorTerms& out) {
  const auto& views = batch.views;
  std::vector<size_t> p_set;
  for (size_t v = 0; v < views.size(); ++v) {
    if (v == i) continue;
    if (share_label(views[i], views[v])) p_set.push_back(v);
  }
  if (p_set.empty()) return false;

  out.positives.clear();
  out.mult_total = 0.0;
  for (size_t v : p_set) {
    double k = 0.0;
    for (size_t u : p_set) {
      if (views[u].sample_index == views[v].sample_index) k += 1.0;
    }
    out.positives.emplace_back(v, k);
    out.mult_total += k;
  }
  out.inv_p = 1.0 / static_cast<double>(p_set.size());
  return true;
}

std::vector<std::vector<double>> pairwise_scaled_dots(const SupColaBatch& batch, double tau) {
  const auto& views = batch.views;
  const size_t n = views.size();
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (size_t d = 0; d < views[i].z.size(); ++d) dot += views[i].z[d] * views[j].z[d];
      s[i][j] = dot / tau;
      s[j][i] = s[i][j];
    }
  }
  return s;
}

double logsumexp_row(const std::vector<double>& row, size_t skip) {
  double m = -std::numeric_limits<double>::infinity();
  for (size_t n = 0; n < row.size(); ++n) {
    if (n == skip) continue;
    m = std::max(m, row[n]);
  }
  double sum = 0.0;
  for (size_t n = 0; n < row.size(); ++n) {
    if (n == skip) continue;
    sum += std::exp(row[n] - m);
  }
  return m + std::log(sum);
}

}  // namespace

double supcola_loss(const SupColaBatch& batch, const LossConfig& cfg) {
  batch.validate();
  cfg.validate();

  const auto s = pairwise_scaled_dots(batch, cfg.temperature);
  const size_t n = batch.views.size();

  double loss = 0.0;
  AnchorTerms terms;
  for (size_t i = 0; i < n; ++i) {
    if (!anchor_terms(batch, i, terms)) continue;
    double lse = logsumexp_row(s[i], i);
    double anchor = 0.0;
    for (const auto& [v, mult] : terms.positives) {
      anchor += mult * (lse - s[i][v]);
    }
    loss += terms.inv_p * anchor;
  }
  return loss;
}

std::vector<std::vector<double>> supcola_grad(const SupColaBatch& batch, const LossConfig& cfg) {
  batch.validate();
  cfg.validate();

  const auto& views = batch.views;
  const size_t n = views.size();
  const size_t dim = views.front().z.size();
  const double tau = cfg.temperature;
  const auto s = pairwise_scaled_dots(batch, tau);

  std::vector<std::vector<double>> grad(n, std::vector<double>(dim, 0.0));

  AnchorTerms terms;
  for (size_t i = 0; i < n; ++i) {
    if (!anchor_terms(batch, i, terms)) continue;

    // dL_i/ds[i][n] = (C_i * softmax_i(n) - c_in) / |P(i)|, where C_i is
    // the total multiplicity and c_in the multiplicity of n (0 outside P).
    double m = -std::numeric_limits<double>::infinity();
    for (size_t v = 0; v < n; ++v) {
      if (v != i) m = std::max(m, s[i][v]);
    }
    double denom = 0.0;
    for (size_t v = 0; v < n; ++v) {
      if (v != i) denom += std::exp(s[i][v] - m);
    }

    std::vector<double> coeff(n, 0.0);
    for (size_t v = 0; v < n; ++v) {
      if (v == i) continue;
      coeff[v] = terms.mult_total * (std::exp(s[i][v] - m) / denom);
    }
    for (const auto& [v, mult] : terms.positives) coeff[v] -= mult;

    for (size_t v = 0; v < n; ++v) {
      if (v == i || coeff[v] == 0.0) continue;
      double c = terms.inv_p * coeff[v] / tau;
      for (size_t d = 0; d < dim; ++d) {
        grad[i][d] += c * views[v].z[d];
        grad[v][d] += c * views[i].z[d];
      }
    }
  }
  return grad;
}

AlignTrace align_toy(SupColaBatch batch, const LossConfig& cfg, size_t steps,
                     double learning_rate) {
  if (steps == 0) fail(ErrorCode::InvalidArgument, "align_toy requires steps >= 1");
  if (!(learning_rate > 0.0)) fail(ErrorCode::InvalidArgument, "learning_rate must be positive");
  batch.validate_normalized();
  cfg.validate();

  AlignTrace trace;
  trace.loss.reserve(steps + 1);
  for (size_t step = 0; step < steps; ++step) {
    trace.loss.push_back(supcola_loss(batch, cfg));
    auto grad = supcola_grad(batch, cfg);
    for (size_t v = 0; v < batch.views.size(); ++v) {
      auto& z = batch.views[v].z;
      double norm = 0.0;
      for (size_t d = 0; d < z.size(); ++d) {
        z[d] -= learning_rate * grad[v][d];
        norm += z[d] * z[d];
      }
      if (norm > 0.0) {
        double inv = 1.0 / std::sqrt(norm);
        for (double& x : z) x *= inv;
      }
    }
  }
  trace.loss.push_back(supcola_loss(batch, cfg));
  trace.batch = std::move(batch);
  return trace;
}

SupColaBatch read_batch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open batch file '" + path + "'");

  SupColaBatch batch;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> cols;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        cols.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cols.size() != 4) {
      fail(ErrorCode::Parse,
           "batch file line " + std::to_string(line_no) + ": expected 4 fields");
    }

    ViewEmbedding view;
    try {
      view.sample_index = static_cast<uint32_t>(std::stoul(cols[0]));
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "batch file line " + std::to_string(line_no) + ": bad sample index");
    }
    view.kind = view_kind_from_name(cols[1]);

    std::stringstream labels(cols[2]);
    std::string label;
    while (std::getline(labels, label, '|')) {
      if (!label.empty()) view.labels.push_back(label);
    }

    std::stringstream values(cols[3]);
    double x;
    while (values >> x) view.z.push_back(x);
    if (view.z.empty()) {
      fail(ErrorCode::Parse, "batch file line " + std::to_string(line_no) + ": no vector values");
    }
    batch.views.push_back(std::move(view));
  }
  batch.validate_normalized();
  return batch;
}

void write_batch_file(const SupColaBatch& batch, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write batch file '" + path + "'");
  char buf[32];
  for (const auto& view : batch.views) {
    out << view.sample_index << '\t' << view_kind_name(view.kind) << '\t';
    for (size_t i = 0; i < view.labels.size(); ++i) {
      if (i) out << '|';
      out << view.labels[i];
    }
    out << '\t';
    for (size_t i = 0; i < view.z.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", view.z[i]);
      if (i) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace mms
