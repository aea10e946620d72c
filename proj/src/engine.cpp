#include "mms/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mms/text.hpp"

namespace mms {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

int64_t elapsed_us(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - since).count();
}

double dot_f(const std::vector<float>& a, const std::vector<float>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

constexpr size_t kNoLimit = std::numeric_limits<size_t>::max();
constexpr size_t kLowResultThreshold = 5;

void validate_filters(const FilterSpec& filters) {
  if (filters.behavior && !is_valid_behavior(*filters.behavior)) {
    fail(ErrorCode::InvalidArgument,
         "behavior filter '" + *filters.behavior + "' is not one of still|animated|video");
  }
  if (filters.license && !is_valid_license(*filters.license)) {
    fail(ErrorCode::InvalidArgument,
         "license filter '" + *filters.license + "' is not one of free|premium");
  }
}

}  // namespace

const char* route_name(QueryPlan::Route r) {
  return r == QueryPlan::Route::Hybrid ? "HYBRID" : "LONG";
}

Engine::Engine(EngineConfig cfg)
    : Engine(std::move(cfg), IntentGraph{}) {
  graph_ = config_.intent_graph_path.empty() ? IntentGraph::builtin_fixture()
                                             : IntentGraph::load_file(config_.intent_graph_path);
}

Engine::Engine(EngineConfig cfg, IntentGraph graph)
    : config_(std::move(cfg)), graph_(std::move(graph)) {
  config_.validate();
  sparsifiers_.reserve(config_.spaces.size());
  for (const auto& space : config_.spaces) sparsifiers_.emplace_back(space);
  primary_idx_ = space_index(config_.primary_space);
  intent_idx_ = space_index(config_.intent_space);
  keyword_ = KeywordIndex(config_.bm25, config_.boosts);
  sparse_ = SparseIndex(config_.primary_space, config_.spaces[primary_idx_].sparse_dim);
}

size_t Engine::space_index(const std::string& name) const {
  for (size_t i = 0; i < config_.spaces.size(); ++i) {
    if (config_.spaces[i].name == name) return i;
  }
  fail(ErrorCode::Config, "embedding space '" + name + "' is not in the catalog");
}

void Engine::require_ready() const {
  if (!built_) fail(ErrorCode::SnapshotNotLoaded, "engine has no built or loaded snapshot");
}

const StoredDoc& Engine::doc(uint32_t ordinal) const {
  if (ordinal >= docs_.size()) fail(ErrorCode::InvalidArgument, "document ordinal out of range");
  return docs_[ordinal];
}

std::optional<uint32_t> Engine::ordinal_of(const std::string& id) const {
  auto it = id_to_ordinal_.find(id);
  if (it == id_to_ordinal_.end()) return std::nullopt;
  return it->second;
}

DenseEmbedding Engine::embed_query(const std::string& text, const std::string& space_name) const {
  return toy_embed(text, config_.spaces[space_index(space_name)]);
}

SparseEmbedding Engine::sparsify_query(const DenseEmbedding& dense) const {
  return sparsifiers_[space_index(dense.space)].sparsify(dense);
}

StoredDoc Engine::build_doc(const TemplateRecord& record) const {
  if (record.id.empty()) fail(ErrorCode::Parse, "field 'id' is required");
  if (record.title.empty()) fail(ErrorCode::Parse, "field 'title' is required");
  if (!is_valid_behavior(record.behavior)) {
    fail(ErrorCode::Parse,
         "field 'behavior': '" + record.behavior + "' is not one of still|animated|video");
  }
  if (!is_valid_license(record.license)) {
    fail(ErrorCode::Parse, "field 'license': '" + record.license + "' is not one of free|premium");
  }
  for (const auto& [space_name, values] : record.embeddings) {
    bool known = false;
    for (const auto& s : config_.spaces) known = known || s.name == space_name;
    if (!known) fail(ErrorCode::Parse, "embedding references unknown space '" + space_name + "'");
    (void)values;
  }

  StoredDoc doc;
  doc.id = record.id;
  doc.title = record.title;
  doc.date_days = parse_iso_date_days(record.date);
  doc.impressions = record.impressions;
  doc.clicks = record.clicks;
  doc.edits = record.edits;
  doc.exports = record.exports;

  std::string fallback_text = record.title;
  for (const auto& t : record.topics) {
    fallback_text += ' ';
    fallback_text += t;
  }

  doc.dense.resize(config_.spaces.size());
  for (size_t i = 0; i < config_.spaces.size(); ++i) {
    const auto& space = config_.spaces[i];
    auto it = record.embeddings.find(space.name);
    if (it != record.embeddings.end()) {
      DenseEmbedding e{space.name, it->second};
      validate_dense(e, space);
      l2_normalize(e.values);
      doc.dense[i] = std::move(e.values);
    } else {
      doc.dense[i] = toy_embed(fallback_text, space).values;
    }
  }

  const auto& primary_space = config_.spaces[primary_idx_];
  if (record.sparse) {
    validate_sparse(*record.sparse, primary_space);
    doc.sparse = *record.sparse;
  } else {
    DenseEmbedding primary{primary_space.name, doc.dense[primary_idx_]};
    doc.sparse = sparsifiers_[primary_idx_].sparsify(primary);
  }

  // Intent strings may be node ids or surface forms; unresolved intents are
  // dropped (they cannot participate in recovery).
  std::set<std::string> resolved;
  for (const auto& intent : record.intents) {
    if (graph_.has_node(intent)) {
      resolved.insert(intent);
    } else if (const std::string* id = graph_.lookup_surface(normalize_join(intent))) {
      resolved.insert(*id);
    }
  }
  doc.intent_ids.assign(resolved.begin(), resolved.end());
  return doc;
}

IngestReport Engine::ingest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open corpus file '" + path + "'");

  std::vector<std::pair<size_t, TemplateRecord>> records;
  std::vector<IngestError> parse_errors;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.emplace_back(line_no, parse_template_json(line));
    } catch (const Error& e) {
      parse_errors.push_back({line_no, e.what()});
    }
  }

  IngestReport report = ingest_lines(records);
  report.errors.insert(report.errors.end(), parse_errors.begin(), parse_errors.end());
  std::sort(report.errors.begin(), report.errors.end(),
            [](const IngestError& a, const IngestError& b) { return a.line < b.line; });
  report.skipped += parse_errors.size();
  return report;
}

IngestReport Engine::ingest_records(const std::vector<TemplateRecord>& records) {
  std::vector<std::pair<size_t, TemplateRecord>> lines;
  lines.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) lines.emplace_back(i + 1, records[i]);
  return ingest_lines(lines);
}

IngestReport Engine::ingest_lines(const std::vector<std::pair<size_t, TemplateRecord>>& records) {
  if (built_) fail(ErrorCode::State, "engine already holds a snapshot; build a fresh engine");

  IngestReport report;
  for (const auto& [line_no, record] : records) {
    try {
      if (id_to_ordinal_.count(record.id)) {
        fail(ErrorCode::DuplicateDocument, "duplicate template id '" + record.id + "'");
      }
      StoredDoc doc = build_doc(record);
      uint32_t ordinal = static_cast<uint32_t>(docs_.size());

      std::array<std::vector<std::string>, kTextFieldCount> field_tokens;
      field_tokens[0] = tokenize(record.title);
      field_tokens[1] = tokenize(join_tokens(record.topics));
      field_tokens[2] = tokenize(join_tokens(record.mood));
      field_tokens[3] = tokenize(join_tokens(record.style));
      DocAttributes attrs;
      attrs.language = record.language.empty() ? "en-US" : record.language;
      attrs.region = record.region.empty() ? "all" : record.region;
      attrs.behavior = record.behavior;
      attrs.license = record.license;

      keyword_.insert(ordinal, field_tokens, attrs);
      sparse_.insert(ordinal, doc.sparse);
      intents_.insert(ordinal, doc.intent_ids);
      id_to_ordinal_.emplace(doc.id, ordinal);
      docs_.push_back(std::move(doc));
      ++report.indexed;
    } catch (const Error& e) {
      report.errors.push_back({line_no, e.what()});
      ++report.skipped;
    }
  }

  keyword_.freeze();
  sparse_.freeze();

  if (!config_.reference_date.empty()) {
    reference_days_ = parse_iso_date_days(config_.reference_date);
  } else {
    reference_days_ = 0;
    for (const auto& doc : docs_) reference_days_ = std::max(reference_days_, doc.date_days);
  }

  built_ = true;
  digest_ = compute_digest();
  report.digest = to_hex(digest_);
  return report;
}

QueryPlan Engine::plan(const std::string& query_text, const FilterSpec& filters) const {
  validate_filters(filters);
  QueryPlan p;
  p.tokens = tokenize(query_text);
  if (p.tokens.empty()) fail(ErrorCode::EmptyQuery, "query is empty after normalization");
  p.word_count = static_cast<uint32_t>(p.tokens.size());
  p.route = p.word_count >= config_.long_query_min_words ? QueryPlan::Route::Long
                                                         : QueryPlan::Route::Hybrid;
  p.intents = graph_.extract(query_text);
  p.filters = filters;
  return p;
}

std::vector<Engine::LongHit> Engine::long_query_scan(const DenseEmbedding& q_primary,
                                                     const DenseEmbedding& q_intent,
                                                     const FilterSpec& filters) const {
  require_ready();
  validate_dense(q_primary, config_.spaces[primary_idx_]);
  validate_dense(q_intent, config_.spaces[intent_idx_]);
  validate_filters(filters);

  const double w = config_.rescore.long_query_intent_weight;
  std::vector<LongHit> hits;
  for (uint32_t ord = 0; ord < docs_.size(); ++ord) {
    if (!keyword_.passes(ord, filters)) continue;
    LongHit h;
    h.doc_id = ord;
    h.sim_primary = dot_f(q_primary.values, docs_[ord].dense[primary_idx_]);
    h.sim_intent = dot_f(q_intent.values, docs_[ord].dense[intent_idx_]);
    h.blend = w * h.sim_intent + (1.0 - w) * h.sim_primary;
    hits.push_back(h);
  }
  std::sort(hits.begin(), hits.end(), [](const LongHit& a, const LongHit& b) {
    if (a.blend != b.blend) return a.blend > b.blend;
    return a.doc_id < b.doc_id;
  });
  return hits;
}

SearchResponse Engine::search(const SearchRequest& req) const {
  require_ready();
  const auto t_start = Clock::now();

  SearchResponse resp;
  resp.query = req.query;

  const auto t_plan = Clock::now();
  resp.plan = plan(req.query, req.filters);
  resp.timings.plan_us = elapsed_us(t_plan);

  const uint32_t page_size = req.page_size.value_or(config_.page_size);
  if (page_size == 0) fail(ErrorCode::InvalidArgument, "page_size must be positive");
  resp.page = req.page;
  resp.page_size = page_size;

  const bool long_route =
      resp.plan.route == QueryPlan::Route::Long && !config_.long_hybrid_union;
  std::vector<Ranked> organic =
      long_route ? run_long(resp.plan, resp.counts, resp.timings, req.explain)
                 : run_hybrid(resp.plan, req, resp.counts, resp.timings, req.explain);

  resp.organic_count = organic.size();
  resp.counts.organic = organic.size();

  // Null/low recovery runs only on the hybrid route; the long route already
  // scores every filtered document. The trigger always uses the organic
  // count, while the null/low flags describe the page the user ends up
  // seeing (recovery included).
  std::vector<Ranked> recovered;
  const bool recovery_on = req.recovery.value_or(config_.recovery_enabled);
  if (resp.plan.route == QueryPlan::Route::Hybrid && recovery_on &&
      organic.size() < kLowResultThreshold) {
    const auto t_rec = Clock::now();
    std::unordered_set<uint32_t> exclude;
    for (const auto& r : organic) exclude.insert(r.ordinal);
    size_t fill = page_size > organic.size() ? page_size - organic.size() : 0;
    if (fill > 0) {
      // Hard filters apply to recovered documents as well.
      for (const auto& rec : intents_.recover(resp.plan.intents, exclude, kNoLimit)) {
        if (recovered.size() >= fill) break;
        if (!keyword_.passes(rec.doc_id, resp.plan.filters)) continue;
        Ranked r;
        r.ordinal = rec.doc_id;
        r.item.id = docs_[rec.doc_id].id;
        r.item.title = docs_[rec.doc_id].title;
        r.item.score = static_cast<double>(rec.shared_intents);
        r.item.recovery = true;
        if (req.explain) {
          ResultExplain ex;
          ex.shared_intents = rec.shared_intents;
          r.item.explain = ex;
        }
        recovered.push_back(std::move(r));
      }
    }
    resp.timings.recovery_us = elapsed_us(t_rec);
  }
  resp.recovery_applied = !recovered.empty();
  resp.counts.recovered = recovered.size();
  resp.total_count = organic.size() + recovered.size();
  resp.null_page = resp.total_count == 0;
  resp.low_page = resp.total_count < kLowResultThreshold;

  // Offset pagination over organic results followed by the recovery block.
  std::vector<ResultItem> page_items;
  const size_t offset = static_cast<size_t>(req.page) * page_size;
  for (size_t i = offset; i < resp.total_count && page_items.size() < page_size; ++i) {
    page_items.push_back(i < organic.size() ? organic[i].item
                                            : recovered[i - organic.size()].item);
  }
  resp.results = std::move(page_items);
  resp.timings.total_us = elapsed_us(t_start);
  return resp;
}

std::vector<Engine::Ranked> Engine::run_hybrid(const QueryPlan& plan, const SearchRequest& req,
                                       StageCounts& counts, StageTimings& timings,
                                       bool explain) const {
  const auto t_recall = Clock::now();

  const size_t kw_limit = config_.keyword_recall_limit ? config_.keyword_recall_limit : kNoLimit;
  const auto kw_hits = keyword_.match(plan.tokens, plan.filters, kw_limit);
  counts.keyword_hits = kw_hits.size();

  const DenseEmbedding q_primary = toy_embed(req.query, config_.spaces[primary_idx_]);
  const SparseEmbedding q_sparse = sparsifiers_[primary_idx_].sparsify(q_primary);
  const size_t sp_limit = config_.sparse_recall_limit ? config_.sparse_recall_limit : kNoLimit;
  const auto sparse_hits = sparse_.match(q_sparse, config_.min_dims, sp_limit);
  counts.sparse_hits = sparse_hits.size();

  // Union of both recall paths; filters apply before first-round scoring.
  struct Cand {
    double bm25 = 0.0;
    bool keyword = false;
    bool sparse = false;
  };
  std::unordered_map<uint32_t, Cand> cands;
  for (const auto& hit : kw_hits) {
    auto& c = cands[hit.doc_id];
    c.bm25 = hit.score;
    c.keyword = true;
  }
  for (const auto& hit : sparse_hits) {
    if (!keyword_.passes(hit.doc_id, plan.filters)) continue;
    cands[hit.doc_id].sparse = true;
  }
  counts.union_size = cands.size();
  timings.recall_us = elapsed_us(t_recall);

  const auto t_first = Clock::now();
  std::vector<uint32_t> ordinals;
  ordinals.reserve(cands.size());
  for (const auto& [ord, c] : cands) ordinals.push_back(ord);
  std::sort(ordinals.begin(), ordinals.end());

  double bm25_min = 0.0, bm25_max = 0.0;
  uint64_t behavior_max = 0;
  bool first = true;
  for (uint32_t ord : ordinals) {
    double bm25 = cands[ord].bm25;
    bm25_min = first ? bm25 : std::min(bm25_min, bm25);
    bm25_max = first ? bm25 : std::max(bm25_max, bm25);
    behavior_max = std::max(behavior_max, docs_[ord].edits + docs_[ord].exports);
    first = false;
  }

  struct Scored {
    uint32_t ordinal;
    CandidateFeatures features;
    double bm25_raw;
    double first_round;
  };
  std::vector<Scored> scored;
  scored.reserve(ordinals.size());
  for (uint32_t ord : ordinals) {
    const Cand& c = cands[ord];
    const StoredDoc& d = docs_[ord];
    const DocAttributes& attrs = keyword_.attributes(ord);
    Scored s;
    s.ordinal = ord;
    s.bm25_raw = c.bm25;
    s.features.bm25_norm = minmax_norm(c.bm25, bm25_min, bm25_max);
    s.features.age_days = static_cast<double>(reference_days_ - d.date_days);
    s.features.locale_match = locale_match_score(req.locale.language, req.locale.region,
                                                 attrs.language, attrs.region);
    s.features.behavior_prior = behavior_prior(d.edits + d.exports, behavior_max);
    s.features.sparse_only = c.sparse && !c.keyword;
    s.first_round = first_round_score(s.features, config_.first_round);
    scored.push_back(std::move(s));
  }

  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.first_round != b.first_round) return a.first_round > b.first_round;
    return a.ordinal < b.ordinal;
  });
  std::vector<FirstRoundItem> ranked;
  ranked.reserve(scored.size());
  for (const auto& s : scored) ranked.push_back({s.ordinal, s.first_round});
  timings.first_round_us = elapsed_us(t_first);

  const auto t_rescore = Clock::now();
  const bool long_blend = plan.route == QueryPlan::Route::Long;
  DenseEmbedding q_intent;
  if (long_blend) q_intent = toy_embed(req.query, config_.spaces[intent_idx_]);
  auto sims = [&](uint32_t ord) {
    SimPair s;
    s.primary = dot_f(q_primary.values, docs_[ord].dense[primary_idx_]);
    if (long_blend) s.intent = dot_f(q_intent.values, docs_[ord].dense[intent_idx_]);
    return s;
  };
  const auto rescored = rescore_topk(ranked, sims, config_.rescore, long_blend);
  counts.rescored = std::min(config_.rescore.depth, rescored.size());
  timings.rescore_us = elapsed_us(t_rescore);

  std::unordered_map<uint32_t, const Scored*> by_ordinal;
  for (const auto& s : scored) by_ordinal.emplace(s.ordinal, &s);

  std::vector<Ranked> out;
  out.reserve(rescored.size());
  for (const auto& item : rescored) {
    const Scored& s = *by_ordinal.at(item.doc_id);
    const Cand& c = cands.at(item.doc_id);
    Ranked r;
    r.ordinal = item.doc_id;
    r.item.id = docs_[item.doc_id].id;
    r.item.title = docs_[item.doc_id].title;
    r.item.score = item.score;
    r.item.keyword = c.keyword;
    r.item.sparse = c.sparse;
    if (explain) {
      ResultExplain ex;
      ex.bm25_raw = s.bm25_raw;
      ex.bm25_norm = s.features.bm25_norm;
      ex.recency = std::exp2(-std::max(0.0, s.features.age_days) /
                             config_.first_round.recency_half_life_days);
      ex.locale = s.features.locale_match;
      ex.behavior = s.features.behavior_prior;
      ex.first_round = item.first_round;
      ex.first_round_norm = item.first_round_norm;
      ex.sim_primary = item.sim.primary;
      ex.sim_intent = item.sim.intent;
      ex.sim_blend = item.sim_blend;
      ex.rescored = item.rescored;
      ex.demoted = s.features.sparse_only;
      r.item.explain = ex;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Engine::Ranked> Engine::run_long(const QueryPlan& plan, StageCounts& counts,
                                     StageTimings& timings, bool explain) const {
  const auto t_recall = Clock::now();
  const std::string query = join_tokens(plan.tokens);
  const DenseEmbedding q_primary = toy_embed(query, config_.spaces[primary_idx_]);
  const DenseEmbedding q_intent = toy_embed(query, config_.spaces[intent_idx_]);
  const auto hits = long_query_scan(q_primary, q_intent, plan.filters);
  counts.union_size = hits.size();
  timings.recall_us = elapsed_us(t_recall);

  std::vector<Ranked> out;
  out.reserve(hits.size());
  for (const auto& hit : hits) {
    Ranked r;
    r.ordinal = hit.doc_id;
    r.item.id = docs_[hit.doc_id].id;
    r.item.title = docs_[hit.doc_id].title;
    r.item.score = hit.blend;
    r.item.long_path = true;
    if (explain) {
      ResultExplain ex;
      ex.sim_primary = hit.sim_primary;
      ex.sim_intent = hit.sim_intent;
      ex.sim_blend = hit.blend;
      r.item.explain = ex;
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

json filters_to_json(const FilterSpec& f) {
  json j = json::object();
  if (f.language) j["language"] = *f.language;
  if (f.region) j["region"] = *f.region;
  if (f.behavior) j["behavior"] = *f.behavior;
  if (f.license) j["license"] = *f.license;
  return j;
}

json explain_to_json(const ResultExplain& ex, bool recovery_item) {
  json j;
  if (recovery_item) {
    j["shared_intents"] = ex.shared_intents;
    return j;
  }
  j["bm25_raw"] = ex.bm25_raw;
  j["bm25_norm"] = ex.bm25_norm;
  j["recency"] = ex.recency;
  j["locale"] = ex.locale;
  j["behavior"] = ex.behavior;
  j["first_round"] = ex.first_round;
  j["first_round_norm"] = ex.first_round_norm;
  j["sim_primary"] = ex.sim_primary;
  j["sim_intent"] = ex.sim_intent;
  j["sim_blend"] = ex.sim_blend;
  j["rescored"] = ex.rescored;
  j["demoted"] = ex.demoted;
  return j;
}

}  // namespace

std::string SearchResponse::to_json_text(bool include_timings) const {
  json j;
  j["query"] = query;
  j["plan"] = {{"route", route_name(plan.route)},
               {"word_count", plan.word_count},
               {"intents", std::vector<std::string>(plan.intents.begin(), plan.intents.end())},
               {"filters", filters_to_json(plan.filters)}};
  j["null"] = null_page;
  j["low"] = low_page;
  j["recovery_applied"] = recovery_applied;
  j["organic_count"] = organic_count;
  j["total_count"] = total_count;
  j["page"] = page;
  j["page_size"] = page_size;
  j["counts"] = {{"keyword", counts.keyword_hits}, {"sparse", counts.sparse_hits},
                 {"union", counts.union_size},     {"rescored", counts.rescored},
                 {"organic", counts.organic},      {"recovered", counts.recovered}};

  json items = json::array();
  for (const auto& r : results) {
    json item;
    item["id"] = r.id;
    item["title"] = r.title;
    item["score"] = r.score;
    item["keyword"] = r.keyword;
    item["sparse"] = r.sparse;
    item["recovery"] = r.recovery;
    item["long_path"] = r.long_path;
    if (r.explain) item["explain"] = explain_to_json(*r.explain, r.recovery);
    items.push_back(std::move(item));
  }
  j["results"] = std::move(items);

  if (include_timings) {
    j["timings_us"] = {{"plan", timings.plan_us},
                       {"recall", timings.recall_us},
                       {"first_round", timings.first_round_us},
                       {"rescore", timings.rescore_us},
                       {"recovery", timings.recovery_us},
                       {"total", timings.total_us}};
  }
  return j.dump();
}

std::string IngestReport::to_json_text() const {
  json j;
  j["indexed"] = indexed;
  j["skipped"] = skipped;
  j["digest"] = digest;
  json errs = json::array();
  for (const auto& e : errors) {
    errs.push_back({{"line", e.line}, {"message", e.message}});
  }
  j["errors"] = std::move(errs);
  return j.dump();
}

}  // namespace mms
