#include "mmsearch.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "mms/config.hpp"
#include "mms/engine.hpp"
#include "mms/eval.hpp"
#include "mms/supcola.hpp"
#include "mms/synth.hpp"

using nlohmann::json;

struct mms_engine {
  mms::Engine impl;
};

namespace {

thread_local std::string t_last_error;

mms_status status_from_code(mms::ErrorCode code) {
  using mms::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return MMS_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return MMS_ERR_PARSE;
    case ErrorCode::EmptyQuery: return MMS_ERR_EMPTY_QUERY;
    case ErrorCode::EmptyText: return MMS_ERR_EMPTY_TEXT;
    case ErrorCode::SpaceMismatch: return MMS_ERR_SPACE_MISMATCH;
    case ErrorCode::ZeroVector: return MMS_ERR_ZERO_VECTOR;
    case ErrorCode::DuplicateDocument: return MMS_ERR_DUPLICATE_DOCUMENT;
    case ErrorCode::MissingEmbedding: return MMS_ERR_MISSING_EMBEDDING;
    case ErrorCode::DegenerateBatch: return MMS_ERR_DEGENERATE_BATCH;
    case ErrorCode::SnapshotNotLoaded: return MMS_ERR_SNAPSHOT_NOT_LOADED;
    case ErrorCode::CorruptSnapshot: return MMS_ERR_CORRUPT_SNAPSHOT;
    case ErrorCode::VersionMismatch: return MMS_ERR_VERSION_MISMATCH;
    case ErrorCode::Io: return MMS_ERR_IO;
    case ErrorCode::Config: return MMS_ERR_CONFIG;
    case ErrorCode::State: return MMS_ERR_STATE;
    case ErrorCode::Internal: return MMS_ERR_INTERNAL;
  }
  return MMS_ERR_INTERNAL;
}

mms_status set_error(mms_status status, const std::string& message) {
  t_last_error = message;
  return status;
}

template <typename Fn>
mms_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const mms::Error& e) {
    return set_error(status_from_code(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(MMS_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return set_error(MMS_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(MMS_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mms_status require(bool ok, const char* what) {
  if (ok) return MMS_OK;
  return set_error(MMS_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

json parse_json(const char* text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    mms::fail(mms::ErrorCode::Parse, std::string("invalid ") + what + " JSON: " + e.what());
  }
}

mms::SearchRequest parse_search_request(const json& j) {
  mms::SearchRequest req;
  if (!j.is_object() || !j.contains("query") || !j.at("query").is_string()) {
    mms::fail(mms::ErrorCode::InvalidArgument, "search request needs a string 'query'");
  }
  req.query = j.at("query").get<std::string>();

  if (j.contains("filters")) {
    const auto& f = j.at("filters");
    if (f.contains("language")) req.filters.language = f.at("language").get<std::string>();
    if (f.contains("region")) req.filters.region = f.at("region").get<std::string>();
    if (f.contains("behavior")) req.filters.behavior = f.at("behavior").get<std::string>();
    if (f.contains("license")) req.filters.license = f.at("license").get<std::string>();
  }
  if (j.contains("locale")) {
    const auto& l = j.at("locale");
    if (l.contains("language")) req.locale.language = l.at("language").get<std::string>();
    if (l.contains("region")) req.locale.region = l.at("region").get<std::string>();
  }
  if (j.contains("page")) req.page = j.at("page").get<uint32_t>();
  if (j.contains("page_size")) req.page_size = j.at("page_size").get<uint32_t>();
  if (j.contains("explain")) req.explain = j.at("explain").get<bool>();
  if (j.contains("timings")) req.timings = j.at("timings").get<bool>();
  if (j.contains("recovery")) req.recovery = j.at("recovery").get<bool>();
  return req;
}

std::vector<std::string> eval_queries(const json& j) {
  std::vector<std::string> queries;
  if (j.contains("queries")) {
    for (const auto& q : j.at("queries")) queries.push_back(q.get<std::string>());
  } else if (j.contains("queries_path")) {
    for (const auto& q : mms::read_query_set_jsonl(j.at("queries_path").get<std::string>()).queries) {
      queries.push_back(q.query);
    }
  } else {
    mms::fail(mms::ErrorCode::InvalidArgument, "eval request needs 'queries' or 'queries_path'");
  }
  return queries;
}

// Central-difference gradient of the loss; shares only the loss evaluation
// with the analytic path it cross-checks.
std::vector<std::vector<double>> finite_difference_grad(mms::SupColaBatch batch,
                                                        const mms::LossConfig& cfg, double eps) {
  std::vector<std::vector<double>> grad(batch.views.size());
  for (size_t v = 0; v < batch.views.size(); ++v) {
    grad[v].resize(batch.views[v].z.size());
    for (size_t d = 0; d < batch.views[v].z.size(); ++d) {
      double original = batch.views[v].z[d];
      batch.views[v].z[d] = original + eps;
      double plus = mms::supcola_loss(batch, cfg);
      batch.views[v].z[d] = original - eps;
      double minus = mms::supcola_loss(batch, cfg);
      batch.views[v].z[d] = original;
      grad[v][d] = (plus - minus) / (2.0 * eps);
    }
  }
  return grad;
}

mms::SupColaBatch random_batch(std::mt19937_64& rng, size_t min_views, size_t max_views,
                               size_t dim) {
  std::uniform_int_distribution<size_t> n_views_dist(min_views, max_views);
  std::uniform_int_distribution<int> label_count_dist(1, 3);
  std::uniform_int_distribution<int> label_dist(0, 4);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::normal_distribution<double> normal(0.0, 1.0);

  mms::SupColaBatch batch;
  const size_t n = n_views_dist(rng);
  for (size_t i = 0; i < n; ++i) {
    mms::ViewEmbedding view;
    view.sample_index = static_cast<uint32_t>(i / 2);  // some samples get two views
    view.kind = static_cast<mms::ViewKind>(kind_dist(rng));
    int n_labels = label_count_dist(rng);
    for (int k = 0; k < n_labels; ++k) {
      std::string label(1, static_cast<char>('A' + label_dist(rng)));
      if (std::find(view.labels.begin(), view.labels.end(), label) == view.labels.end()) {
        view.labels.push_back(label);
      }
    }
    view.z.resize(dim);
    double norm = 0.0;
    for (double& x : view.z) {
      x = normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : view.z) x /= norm;
    batch.views.push_back(std::move(view));
  }
  return batch;
}

// Reference single-label supervised contrastive loss (one view per sample),
// used as the reduction cross-check.
double supcon_reference(const std::vector<std::vector<double>>& z,
                        const std::vector<std::string>& labels, double tau) {
  const size_t n = z.size();
  double loss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    std::vector<size_t> positives;
    for (size_t p = 0; p < n; ++p) {
      if (p != i && labels[p] == labels[i]) positives.push_back(p);
    }
    if (positives.empty()) continue;
    double denom = 0.0;
    for (size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      double dot = 0.0;
      for (size_t d = 0; d < z[i].size(); ++d) dot += z[i][d] * z[a][d];
      denom += std::exp(dot / tau);
    }
    double sum = 0.0;
    for (size_t p : positives) {
      double dot = 0.0;
      for (size_t d = 0; d < z[i].size(); ++d) dot += z[i][d] * z[p][d];
      sum += std::log(std::exp(dot / tau) / denom);
    }
    loss += -sum / static_cast<double>(positives.size());
  }
  return loss;
}

json run_loss_check(const json& request) {
  const size_t batches = request.value("batches", size_t{50});
  const uint64_t seed = request.value("seed", uint64_t{13});
  const size_t dim = request.value("dim", size_t{16});
  mms::LossConfig cfg;
  cfg.temperature = request.value("temperature", 0.07);

  std::mt19937_64 rng(seed);
  double max_rel_err = 0.0;
  for (size_t b = 0; b < batches; ++b) {
    mms::SupColaBatch batch = random_batch(rng, 4, 12, dim);
    auto analytic = mms::supcola_grad(batch, cfg);
    auto numeric = finite_difference_grad(batch, cfg, 1e-5);
    double scale = 0.0;
    for (const auto& g : analytic) {
      for (double x : g) scale = std::max(scale, std::abs(x));
    }
    scale = std::max(scale, 1.0);
    for (size_t v = 0; v < analytic.size(); ++v) {
      for (size_t d = 0; d < analytic[v].size(); ++d) {
        max_rel_err = std::max(max_rel_err, std::abs(analytic[v][d] - numeric[v][d]) / scale);
      }
    }
  }
  const bool grad_ok = max_rel_err < 1e-4;

  // Three single-view samples with labels A, A, B on orthogonal axes:
  // two symmetric anchors each contribute -log(e / (e + 1)).
  mms::SupColaBatch hand;
  hand.views.resize(3);
  for (size_t i = 0; i < 3; ++i) {
    hand.views[i].sample_index = static_cast<uint32_t>(i);
    hand.views[i].kind = mms::ViewKind::Image;
    hand.views[i].z.assign(4, 0.0);
  }
  hand.views[0].z[0] = 1.0;
  hand.views[1].z[0] = 1.0;
  hand.views[2].z[1] = 1.0;
  hand.views[0].labels = {"A"};
  hand.views[1].labels = {"A"};
  hand.views[2].labels = {"B"};
  mms::LossConfig unit_tau;
  unit_tau.temperature = 1.0;
  const double hand_loss = mms::supcola_loss(hand, unit_tau);
  const double hand_expected = 2.0 * std::log(1.0 + std::exp(-1.0));
  const bool hand_ok = std::abs(hand_loss - hand_expected) < 1e-9;

  double supcon_max_diff = 0.0;
  for (size_t b = 0; b < 10; ++b) {
    mms::SupColaBatch batch = random_batch(rng, 4, 10, dim);
    std::vector<std::vector<double>> z;
    std::vector<std::string> labels;
    for (size_t i = 0; i < batch.views.size(); ++i) {
      auto& view = batch.views[i];
      view.sample_index = static_cast<uint32_t>(i);  // one view per sample
      view.labels.resize(1);                         // one label per view
      z.push_back(view.z);
      labels.push_back(view.labels[0]);
    }
    double ours = mms::supcola_loss(batch, cfg);
    double reference = supcon_reference(z, labels, cfg.temperature);
    supcon_max_diff = std::max(supcon_max_diff, std::abs(ours - reference));
  }
  const bool supcon_ok = supcon_max_diff < 1e-9;

  json report;
  report["batches"] = batches;
  report["max_rel_err"] = max_rel_err;
  report["grad_ok"] = grad_ok;
  report["hand_example_loss"] = hand_loss;
  report["hand_example_expected"] = hand_expected;
  report["hand_example_ok"] = hand_ok;
  report["supcon_max_abs_diff"] = supcon_max_diff;
  report["supcon_ok"] = supcon_ok;
  report["pass"] = grad_ok && hand_ok && supcon_ok;
  return report;
}

}  // namespace

extern "C" {

const char* mms_version(void) { return "1.0.0"; }

const char* mms_status_name(mms_status status) {
  switch (status) {
    case MMS_OK: return "OK";
    case MMS_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case MMS_ERR_PARSE: return "PARSE";
    case MMS_ERR_EMPTY_QUERY: return "EMPTY_QUERY";
    case MMS_ERR_EMPTY_TEXT: return "EMPTY_TEXT";
    case MMS_ERR_SPACE_MISMATCH: return "SPACE_MISMATCH";
    case MMS_ERR_ZERO_VECTOR: return "ZERO_VECTOR";
    case MMS_ERR_DUPLICATE_DOCUMENT: return "DUPLICATE_DOCUMENT";
    case MMS_ERR_MISSING_EMBEDDING: return "MISSING_EMBEDDING";
    case MMS_ERR_DEGENERATE_BATCH: return "DEGENERATE_BATCH";
    case MMS_ERR_SNAPSHOT_NOT_LOADED: return "SNAPSHOT_NOT_LOADED";
    case MMS_ERR_CORRUPT_SNAPSHOT: return "CORRUPT_SNAPSHOT";
    case MMS_ERR_VERSION_MISMATCH: return "VERSION_MISMATCH";
    case MMS_ERR_IO: return "IO";
    case MMS_ERR_CONFIG: return "CONFIG";
    case MMS_ERR_STATE: return "STATE";
    case MMS_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* mms_last_error(void) { return t_last_error.c_str(); }

mms_status mms_engine_new(const char* config_json, mms_engine** out_engine) {
  if (mms_status s = require(config_json && out_engine, "config_json and out_engine")) return s;
  *out_engine = nullptr;
  return guarded([&]() {
    mms::EngineConfig config = mms::EngineConfig::from_json_text(config_json);
    *out_engine = new mms_engine{mms::Engine(std::move(config))};
    return MMS_OK;
  });
}

mms_status mms_engine_open(const char* snapshot_path, mms_engine** out_engine) {
  if (mms_status s = require(snapshot_path && out_engine, "snapshot_path and out_engine")) return s;
  *out_engine = nullptr;
  return guarded([&]() {
    *out_engine = new mms_engine{mms::Engine::load_snapshot(snapshot_path)};
    return MMS_OK;
  });
}

void mms_engine_free(mms_engine* engine) { delete engine; }

mms_status mms_engine_ingest(mms_engine* engine, const char* corpus_jsonl_path,
                             char** report_json_out) {
  if (mms_status s = require(engine && corpus_jsonl_path, "engine and corpus_jsonl_path")) return s;
  return guarded([&]() {
    mms::IngestReport report = engine->impl.ingest_file(corpus_jsonl_path);
    if (report_json_out) *report_json_out = dup_string(report.to_json_text());
    return MMS_OK;
  });
}

mms_status mms_engine_save(const mms_engine* engine, const char* snapshot_path) {
  if (mms_status s = require(engine && snapshot_path, "engine and snapshot_path")) return s;
  return guarded([&]() {
    engine->impl.save_snapshot(snapshot_path);
    return MMS_OK;
  });
}

mms_status mms_engine_search(const mms_engine* engine, const char* request_json,
                             char** response_json_out) {
  if (mms_status s =
          require(engine && request_json && response_json_out, "engine, request and response out")) {
    return s;
  }
  *response_json_out = nullptr;
  return guarded([&]() {
    json j = parse_json(request_json, "search request");
    mms::SearchRequest req = parse_search_request(j);
    mms::SearchResponse resp = engine->impl.search(req);
    *response_json_out = dup_string(resp.to_json_text(req.timings));
    return MMS_OK;
  });
}

mms_status mms_engine_health(const mms_engine* engine, char** health_json_out) {
  if (mms_status s = require(engine && health_json_out, "engine and health out")) return s;
  *health_json_out = nullptr;
  return guarded([&]() {
    json j;
    j["status"] = engine->impl.ready() ? "ok" : "empty";
    j["doc_count"] = engine->impl.doc_count();
    j["snapshot_digest"] = engine->impl.ready() ? engine->impl.digest() : "";
    *health_json_out = dup_string(j.dump());
    return MMS_OK;
  });
}

mms_status mms_engine_eval(const mms_engine* engine, const char* request_json,
                           char** report_json_out) {
  if (mms_status s =
          require(engine && request_json && report_json_out, "engine, request and report out")) {
    return s;
  }
  *report_json_out = nullptr;
  return guarded([&]() {
    json j = parse_json(request_json, "eval request");
    const std::string mode = j.value("mode", std::string());
    json report;

    if (mode == "title_as_query") {
      size_t sample = j.value("sample", size_t{200});
      uint64_t seed = j.value("seed", uint64_t{7});
      mms::EvalReport r = mms::title_as_query_eval(engine->impl, sample, seed);
      if (j.contains("rows_path")) r.write_jsonl(j.at("rows_path").get<std::string>());
      report = json::parse(r.to_json_text());
      report["mode"] = mode;
    } else if (mode == "rank") {
      mms::EvalQuerySet set;
      if (j.contains("queries_path")) {
        set = mms::read_query_set_jsonl(j.at("queries_path").get<std::string>());
      } else {
        mms::fail(mms::ErrorCode::InvalidArgument, "rank eval needs 'queries_path'");
      }
      mms::EvalReport r = mms::rank_eval(engine->impl, set);
      if (j.contains("rows_path")) r.write_jsonl(j.at("rows_path").get<std::string>());
      report = json::parse(r.to_json_text());
      report["mode"] = mode;
    } else if (mode == "null_rate") {
      auto queries = eval_queries(j);
      bool recovery = j.value("recovery", true);
      mms::NullRates rates = mms::null_rate_eval(engine->impl, queries, recovery);
      report["mode"] = mode;
      report["recovery"] = recovery;
      report["query_count"] = rates.query_count;
      report["null_rate"] = rates.null_rate;
      report["low_rate"] = rates.low_rate;
    } else if (mode == "overlap") {
      auto queries = eval_queries(j);
      size_t k = j.value("k", size_t{100});
      double overlap = mms::sparse_vs_dense_overlap(engine->impl, k, queries);
      report["mode"] = mode;
      report["k"] = k;
      report["query_count"] = queries.size();
      report["mean_overlap"] = overlap;
    } else if (mode == "latency") {
      auto queries = eval_queries(j);
      mms::LatencyReport r = mms::latency_bench(engine->impl, queries);
      report = json::parse(r.to_json_text());
      report["mode"] = mode;
    } else {
      mms::fail(mms::ErrorCode::InvalidArgument,
                "eval mode must be title_as_query|rank|null_rate|overlap|latency");
    }

    *report_json_out = dup_string(report.dump());
    return MMS_OK;
  });
}

mms_status mms_loss_check(const char* request_json, char** report_json_out) {
  if (mms_status s = require(report_json_out != nullptr, "report out")) return s;
  *report_json_out = nullptr;
  return guarded([&]() {
    json request = request_json ? parse_json(request_json, "loss-check request") : json::object();
    *report_json_out = dup_string(run_loss_check(request).dump());
    return MMS_OK;
  });
}

mms_status mms_bench(const char* request_json, char** report_json_out) {
  if (mms_status s = require(report_json_out != nullptr, "report out")) return s;
  *report_json_out = nullptr;
  return guarded([&]() {
    json request = request_json ? parse_json(request_json, "bench request") : json::object();
    const size_t docs = request.value("docs", size_t{300000});
    const uint64_t seed = request.value("seed", uint64_t{11});
    const size_t query_count = request.value("queries", size_t{32});

    // Compact spaces keep the corpus build inside a desk-scale budget; the
    // sparse/dense latency contrast is what the benchmark measures.
    mms::EngineConfig config = mms::EngineConfig::defaults();
    config.spaces = {{"bench", 256, 1024, seed ^ 0xB37Cu, 16}};
    config.primary_space = "bench";
    config.intent_space = "bench";

    mms::SynthOptions options;
    options.seed = seed;
    options.doc_count = docs;
    options.head_query_count = query_count;
    options.tail_query_count = 0;
    options.null_query_count = 0;
    options.clicked_query_count = 0;
    mms::SynthCorpus corpus = mms::generate_synth_corpus(options);

    mms::Engine engine(std::move(config));
    engine.ingest_records(corpus.docs);
    mms::LatencyReport r = mms::latency_bench(engine, corpus.head_queries);

    json report = json::parse(r.to_json_text());
    report["seed"] = seed;
    *report_json_out = dup_string(report.dump());
    return MMS_OK;
  });
}

mms_status mms_synth_corpus(const char* request_json, char** summary_json_out) {
  if (mms_status s = require(request_json != nullptr, "request")) return s;
  return guarded([&]() {
    json request = parse_json(request_json, "synth request");
    mms::SynthOptions options;
    options.doc_count = request.value("docs", size_t{1000});
    options.seed = request.value("seed", uint64_t{20240401});

    if (!request.contains("corpus_path")) {
      mms::fail(mms::ErrorCode::InvalidArgument, "synth request needs 'corpus_path'");
    }
    const std::string corpus_path = request.at("corpus_path").get<std::string>();

    mms::SynthCorpus corpus = mms::generate_synth_corpus(options);
    mms::write_corpus_jsonl(corpus.docs, corpus_path);

    json summary;
    summary["docs"] = corpus.docs.size();
    summary["corpus_path"] = corpus_path;

    if (request.contains("queries_path")) {
      const std::string queries_path = request.at("queries_path").get<std::string>();
      mms::EvalQuerySet all;
      for (const auto& q : corpus.head_queries) all.queries.push_back({q, {}});
      for (const auto& q : corpus.tail_queries) all.queries.push_back({q, {}});
      for (const auto& q : corpus.null_queries) all.queries.push_back({q, {}});
      for (const auto& q : corpus.clicked_queries.queries) all.queries.push_back(q);
      mms::write_query_set_jsonl(all, queries_path);
      summary["queries_path"] = queries_path;
      summary["query_count"] = all.queries.size();
    }
    if (summary_json_out) *summary_json_out = dup_string(summary.dump());
    return MMS_OK;
  });
}

void mms_string_free(char* s) { std::free(s); }

}  // extern "C"
