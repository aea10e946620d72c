#include "mms/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace mms {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  size_t idx = static_cast<size_t>(p * static_cast<double>(values.size() - 1) + 0.5);
  return values[std::min(idx, values.size() - 1)];
}

double dot_f(const std::vector<float>& a, const std::vector<float>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

SearchRequest full_request(const Engine& engine, const std::string& query) {
  SearchRequest req;
  req.query = query;
  req.page_size = static_cast<uint32_t>(
      std::max<size_t>(engine.doc_count() + 64, engine.config().page_size));
  return req;
}

}  // namespace

EvalQuerySet read_query_set_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open query set file '" + path + "'");
  EvalQuerySet set;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorCode::Parse,
           "query set line " + std::to_string(line_no) + ": " + e.what());
    }
    EvalQuery q;
    if (!j.contains("query") || !j.at("query").is_string()) {
      fail(ErrorCode::Parse, "query set line " + std::to_string(line_no) + ": missing 'query'");
    }
    q.query = j.at("query").get<std::string>();
    if (j.contains("expected")) {
      for (const auto& id : j.at("expected")) q.expected_ids.push_back(id.get<std::string>());
    }
    set.queries.push_back(std::move(q));
  }
  return set;
}

void write_query_set_jsonl(const EvalQuerySet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write query set file '" + path + "'");
  for (const auto& q : set.queries) {
    json j;
    j["query"] = q.query;
    j["expected"] = q.expected_ids;
    out << j.dump() << '\n';
  }
}

void EvalReport::recompute_aggregates() {
  mrr = recall_at_1 = recall_at_10 = recall_at_100 = null_rate = low_rate = 0.0;
  if (rows.empty()) return;

  double rr_sum = 0.0, r1 = 0.0, r10 = 0.0, r100 = 0.0;
  size_t nulls = 0, lows = 0;
  size_t with_expected = 0;
  for (const auto& row : rows) {
    if (row.null_page) ++nulls;
    if (row.low_page) ++lows;
    if (row.expected_ranks.empty()) continue;
    ++with_expected;
    if (row.best_rank > 0) rr_sum += 1.0 / static_cast<double>(row.best_rank);
    double hits1 = 0, hits10 = 0, hits100 = 0;
    for (int64_t rank : row.expected_ranks) {
      if (rank > 0 && rank <= 1) hits1 += 1;
      if (rank > 0 && rank <= 10) hits10 += 1;
      if (rank > 0 && rank <= 100) hits100 += 1;
    }
    double n = static_cast<double>(row.expected_ranks.size());
    r1 += hits1 / n;
    r10 += hits10 / n;
    r100 += hits100 / n;
  }
  double nq = static_cast<double>(rows.size());
  if (with_expected > 0) {
    double ne = static_cast<double>(with_expected);
    mrr = rr_sum / ne;
    recall_at_1 = r1 / ne;
    recall_at_10 = r10 / ne;
    recall_at_100 = r100 / ne;
  }
  null_rate = static_cast<double>(nulls) / nq;
  low_rate = static_cast<double>(lows) / nq;
}

std::string EvalReport::to_json_text() const {
  json j;
  j["query_count"] = rows.size();
  j["mrr"] = mrr;
  j["recall_at_1"] = recall_at_1;
  j["recall_at_10"] = recall_at_10;
  j["recall_at_100"] = recall_at_100;
  j["null_rate"] = null_rate;
  j["low_rate"] = low_rate;
  return j.dump();
}

std::string EvalReport::summary_text() const {
  char buf[256];
  std::string out;
  out += "queries  mrr      r@1      r@10     r@100    null     low\n";
  std::snprintf(buf, sizeof(buf), "%-8zu %-8.4f %-8.4f %-8.4f %-8.4f %-8.4f %-8.4f\n",
                rows.size(), mrr, recall_at_1, recall_at_10, recall_at_100, null_rate, low_rate);
  out += buf;
  return out;
}

void EvalReport::write_jsonl(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write report file '" + path + "'");
  for (const auto& row : rows) {
    json j;
    j["query"] = row.query;
    j["best_rank"] = row.best_rank;
    j["expected_ranks"] = row.expected_ranks;
    j["organic_count"] = row.organic_count;
    j["total_count"] = row.total_count;
    j["null"] = row.null_page;
    j["low"] = row.low_page;
    out << j.dump() << '\n';
  }
  out << to_json_text() << '\n';
}

EvalReport rank_eval(const Engine& engine, const EvalQuerySet& set) {
  EvalReport report;
  report.rows.reserve(set.queries.size());

  for (const auto& q : set.queries) {
    PerQueryRow row;
    row.query = q.query;
    SearchResponse resp = engine.search(full_request(engine, q.query));
    row.organic_count = resp.organic_count;
    row.total_count = resp.total_count;
    row.null_page = resp.null_page;
    row.low_page = resp.low_page;

    for (const auto& expected : q.expected_ids) {
      int64_t rank = -1;
      for (size_t i = 0; i < resp.results.size(); ++i) {
        if (resp.results[i].id == expected) {
          rank = static_cast<int64_t>(i) + 1;
          break;
        }
      }
      row.expected_ranks.push_back(rank);
      if (rank > 0 && (row.best_rank < 0 || rank < row.best_rank)) row.best_rank = rank;
    }
    report.rows.push_back(std::move(row));
  }
  report.recompute_aggregates();
  return report;
}

EvalQuerySet title_query_set(const Engine& engine, size_t sample_count, uint64_t seed) {
  const size_t n = engine.doc_count();
  std::vector<uint32_t> ordinals(n);
  for (size_t i = 0; i < n; ++i) ordinals[i] = static_cast<uint32_t>(i);
  if (sample_count < n) {
    std::mt19937_64 rng(seed);
    std::shuffle(ordinals.begin(), ordinals.end(), rng);
    ordinals.resize(sample_count);
    std::sort(ordinals.begin(), ordinals.end());
  }

  EvalQuerySet set;
  set.queries.reserve(ordinals.size());
  for (uint32_t ord : ordinals) {
    EvalQuery q;
    q.query = engine.doc(ord).title;
    q.expected_ids = {engine.doc(ord).id};
    set.queries.push_back(std::move(q));
  }
  return set;
}

EvalReport title_as_query_eval(const Engine& engine, size_t sample_count, uint64_t seed) {
  return rank_eval(engine, title_query_set(engine, sample_count, seed));
}

NullRates null_rate_eval(const Engine& engine, const std::vector<std::string>& queries,
                         bool recovery_on) {
  NullRates rates;
  rates.query_count = queries.size();
  if (queries.empty()) return rates;

  size_t nulls = 0, lows = 0;
  for (const auto& query : queries) {
    SearchRequest req = full_request(engine, query);
    req.recovery = recovery_on;
    SearchResponse resp = engine.search(req);
    size_t visible = recovery_on ? resp.total_count : resp.organic_count;
    if (visible == 0) ++nulls;
    if (visible < 5) ++lows;
  }
  rates.null_rate = static_cast<double>(nulls) / static_cast<double>(queries.size());
  rates.low_rate = static_cast<double>(lows) / static_cast<double>(queries.size());
  return rates;
}

double sparse_vs_dense_overlap(const Engine& engine, size_t k,
                               const std::vector<std::string>& queries) {
  if (k == 0) fail(ErrorCode::InvalidArgument, "overlap k must be positive");
  if (queries.empty()) return 0.0;

  const auto& cfg = engine.config();
  const size_t primary = engine.space_index(cfg.primary_space);
  const size_t limit = std::numeric_limits<size_t>::max();

  double total = 0.0;
  for (const auto& query : queries) {
    DenseEmbedding q_dense = engine.embed_query(query, cfg.primary_space);
    SparseEmbedding q_sparse = engine.sparsify_query(q_dense);

    struct Hit {
      uint32_t ord;
      double sim;
    };
    auto by_sim = [](const Hit& a, const Hit& b) {
      if (a.sim != b.sim) return a.sim > b.sim;
      return a.ord < b.ord;
    };

    std::vector<Hit> sparse_route;
    for (const auto& m : engine.sparse_index().match(q_sparse, cfg.min_dims, limit)) {
      sparse_route.push_back({m.doc_id, dot_f(q_dense.values, engine.doc(m.doc_id).dense[primary])});
    }
    std::sort(sparse_route.begin(), sparse_route.end(), by_sim);
    if (sparse_route.size() > k) sparse_route.resize(k);

    std::vector<Hit> dense_route;
    dense_route.reserve(engine.doc_count());
    for (uint32_t ord = 0; ord < engine.doc_count(); ++ord) {
      dense_route.push_back({ord, dot_f(q_dense.values, engine.doc(ord).dense[primary])});
    }
    size_t keep = std::min(k, dense_route.size());
    std::partial_sort(dense_route.begin(), dense_route.begin() + keep, dense_route.end(), by_sim);
    dense_route.resize(keep);

    std::unordered_set<uint32_t> dense_set;
    for (const auto& h : dense_route) dense_set.insert(h.ord);
    size_t shared = 0;
    for (const auto& h : sparse_route) shared += dense_set.count(h.ord);
    total += static_cast<double>(shared) / static_cast<double>(k);
  }
  return total / static_cast<double>(queries.size());
}

std::string LatencyReport::to_json_text() const {
  json j;
  j["corpus_size"] = corpus_size;
  j["query_count"] = query_count;
  j["sparse_p50_us"] = sparse_p50_us;
  j["sparse_p95_us"] = sparse_p95_us;
  j["dense_p50_us"] = dense_p50_us;
  j["dense_p95_us"] = dense_p95_us;
  j["p50_ratio"] = p50_ratio;
  return j.dump();
}

LatencyReport latency_bench(const Engine& engine, const std::vector<std::string>& queries) {
  if (queries.empty()) fail(ErrorCode::InvalidArgument, "latency_bench needs queries");

  const auto& cfg = engine.config();
  const size_t primary = engine.space_index(cfg.primary_space);
  const size_t limit = std::numeric_limits<size_t>::max();
  constexpr size_t kDenseTop = 100;

  LatencyReport report;
  report.corpus_size = engine.doc_count();
  report.query_count = queries.size();

  // Warm both paths once before timing.
  {
    DenseEmbedding q = engine.embed_query(queries.front(), cfg.primary_space);
    (void)engine.sparse_index().match(engine.sparsify_query(q), cfg.min_dims, limit);
    volatile double sink = 0.0;
    for (uint32_t ord = 0; ord < engine.doc_count(); ++ord) {
      sink += dot_f(q.values, engine.doc(ord).dense[primary]);
    }
    (void)sink;
  }

  std::vector<double> sparse_us, dense_us;
  sparse_us.reserve(queries.size());
  dense_us.reserve(queries.size());

  for (const auto& query : queries) {
    {
      const auto t0 = Clock::now();
      DenseEmbedding q = engine.embed_query(query, cfg.primary_space);
      SparseEmbedding qs = engine.sparsify_query(q);
      auto hits = engine.sparse_index().match(qs, cfg.min_dims, limit);
      const auto t1 = Clock::now();
      if (hits.size() > engine.doc_count()) fail(ErrorCode::Internal, "impossible hit count");
      sparse_us.push_back(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() / 1000.0);
    }
    {
      const auto t0 = Clock::now();
      DenseEmbedding q = engine.embed_query(query, cfg.primary_space);
      std::vector<std::pair<double, uint32_t>> scores;
      scores.reserve(engine.doc_count());
      for (uint32_t ord = 0; ord < engine.doc_count(); ++ord) {
        scores.emplace_back(dot_f(q.values, engine.doc(ord).dense[primary]), ord);
      }
      size_t keep = std::min(kDenseTop, scores.size());
      std::partial_sort(scores.begin(), scores.begin() + keep, scores.end(),
                        [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                        });
      const auto t1 = Clock::now();
      if (!scores.empty() && scores.front().second > engine.doc_count()) {
        fail(ErrorCode::Internal, "impossible ordinal");
      }
      dense_us.push_back(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() / 1000.0);
    }
  }

  report.sparse_p50_us = percentile(sparse_us, 0.50);
  report.sparse_p95_us = percentile(sparse_us, 0.95);
  report.dense_p50_us = percentile(dense_us, 0.50);
  report.dense_p95_us = percentile(dense_us, 0.95);
  report.p50_ratio = report.sparse_p50_us > 0.0 ? report.dense_p50_us / report.sparse_p50_us : 0.0;
  return report;
}

}  // namespace mms
