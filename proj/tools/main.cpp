// mmsearch CLI: operator front end over the shared-library C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmsearch.h"
#include "service.hpp"

using nlohmann::json;

namespace {

struct EngineDeleter {
  void operator()(mms_engine* e) const { mms_engine_free(e); }
};
using EnginePtr = std::unique_ptr<mms_engine, EngineDeleter>;

[[noreturn]] void die(mms_status status) {
  std::cerr << "error [" << mms_status_name(status) << "]: " << mms_last_error() << "\n";
  std::exit(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    std::exit(1);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EnginePtr open_snapshot(const std::string& path) {
  mms_engine* engine = nullptr;
  if (mms_status s = mms_engine_open(path.c_str(), &engine)) die(s);
  return EnginePtr(engine);
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  mms_string_free(s);
  return out;
}

void print_json(const std::string& text, bool pretty) {
  if (!pretty) {
    std::cout << text << "\n";
    return;
  }
  std::cout << json::parse(text).dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmsearch: hybrid sparse/dense multi-modal template search"};
  app.require_subcommand(1);

  // index
  auto* index_cmd = app.add_subcommand("index", "Ingest a corpus and write a snapshot");
  std::string corpus_path, config_path, snapshot_path = "snapshot.mms";
  index_cmd->add_option("--corpus", corpus_path, "Line-delimited JSON corpus")->required();
  index_cmd->add_option("--config", config_path, "Engine configuration JSON file");
  index_cmd->add_option("--out", snapshot_path, "Snapshot output path");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve a snapshot over HTTP");
  std::string serve_snapshot, host = "127.0.0.1";
  int port = 8080;
  serve_cmd->add_option("--snapshot", serve_snapshot, "Snapshot path")->required();
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port");

  // query
  auto* query_cmd = app.add_subcommand("query", "One-shot search against a snapshot");
  std::string query_snapshot, query_text, filters_json;
  bool explain = false, timings = false, pretty = false;
  uint32_t page = 0;
  query_cmd->add_option("--snapshot", query_snapshot, "Snapshot path")->required();
  query_cmd->add_option("query", query_text, "Query text")->required();
  query_cmd->add_option("--filters", filters_json, "Filters as JSON object");
  query_cmd->add_option("--page", page, "Result page");
  query_cmd->add_flag("--explain", explain, "Include per-result component scores");
  query_cmd->add_flag("--timings", timings, "Include per-stage timings");
  query_cmd->add_flag("--pretty", pretty, "Pretty-print the response");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Run the offline evaluation harness");
  std::string eval_snapshot, eval_mode = "title_as_query", eval_queries, eval_rows;
  size_t eval_sample = 200, eval_k = 100;
  uint64_t eval_seed = 7;
  bool eval_recovery = true;
  eval_cmd->add_option("--snapshot", eval_snapshot, "Snapshot path")->required();
  eval_cmd->add_option("--mode", eval_mode, "title_as_query|rank|null_rate|overlap|latency");
  eval_cmd->add_option("--queries", eval_queries, "Query set JSONL path");
  eval_cmd->add_option("--rows", eval_rows, "Write per-query rows to this JSONL path");
  eval_cmd->add_option("--sample", eval_sample, "Documents to sample for title_as_query");
  eval_cmd->add_option("--seed", eval_seed, "Sampling seed");
  eval_cmd->add_option("--k", eval_k, "Overlap depth");
  eval_cmd->add_option("--recovery", eval_recovery, "Apply recovery for null_rate mode");

  // loss-check
  auto* loss_cmd = app.add_subcommand("loss-check", "Contrastive loss gradient suite");
  size_t loss_batches = 50;
  uint64_t loss_seed = 13;
  loss_cmd->add_option("--batches", loss_batches, "Random batches to check");
  loss_cmd->add_option("--seed", loss_seed, "Batch seed");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Sparse recall vs dense scan latency");
  size_t bench_docs = 300000, bench_queries = 32;
  uint64_t bench_seed = 11;
  bench_cmd->add_option("--docs", bench_docs, "Synthetic corpus size");
  bench_cmd->add_option("--queries", bench_queries, "Queries to time");
  bench_cmd->add_option("--seed", bench_seed, "Corpus seed");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  std::string synth_corpus = "corpus.jsonl", synth_queries;
  size_t synth_docs = 1000;
  uint64_t synth_seed = 20240401;
  synth_cmd->add_option("--docs", synth_docs, "Number of templates");
  synth_cmd->add_option("--seed", synth_seed, "Generator seed");
  synth_cmd->add_option("--out", synth_corpus, "Corpus output path");
  synth_cmd->add_option("--queries-out", synth_queries, "Query set output path");

  CLI11_PARSE(app, argc, argv);

  if (*index_cmd) {
    std::string config = config_path.empty() ? "{}" : read_file(config_path);
    mms_engine* engine = nullptr;
    if (mms_status s = mms_engine_new(config.c_str(), &engine)) die(s);
    EnginePtr holder(engine);
    char* report = nullptr;
    if (mms_status s = mms_engine_ingest(engine, corpus_path.c_str(), &report)) die(s);
    std::string report_text = take_string(report);
    if (mms_status s = mms_engine_save(engine, snapshot_path.c_str())) die(s);
    std::cout << report_text << "\n";
    std::cerr << "snapshot written to " << snapshot_path << "\n";
    return 0;
  }

  if (*serve_cmd) {
    EnginePtr engine = open_snapshot(serve_snapshot);
    httplib::Server server;
    mmsearch_tools::attach_routes(server, engine.get());
    std::cerr << "serving on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "error: failed to bind " << host << ":" << port << "\n";
      return 1;
    }
    return 0;
  }

  if (*query_cmd) {
    EnginePtr engine = open_snapshot(query_snapshot);
    json request;
    request["query"] = query_text;
    if (!filters_json.empty()) request["filters"] = json::parse(filters_json);
    if (page) request["page"] = page;
    request["explain"] = explain;
    request["timings"] = timings;
    char* response = nullptr;
    if (mms_status s = mms_engine_search(engine.get(), request.dump().c_str(), &response)) die(s);
    print_json(take_string(response), pretty);
    return 0;
  }

  if (*eval_cmd) {
    EnginePtr engine = open_snapshot(eval_snapshot);
    json request;
    request["mode"] = eval_mode;
    if (!eval_queries.empty()) request["queries_path"] = eval_queries;
    if (!eval_rows.empty()) request["rows_path"] = eval_rows;
    request["sample"] = eval_sample;
    request["seed"] = eval_seed;
    request["k"] = eval_k;
    request["recovery"] = eval_recovery;
    char* report = nullptr;
    if (mms_status s = mms_engine_eval(engine.get(), request.dump().c_str(), &report)) die(s);
    print_json(take_string(report), true);
    return 0;
  }

  if (*loss_cmd) {
    json request;
    request["batches"] = loss_batches;
    request["seed"] = loss_seed;
    char* report = nullptr;
    if (mms_status s = mms_loss_check(request.dump().c_str(), &report)) die(s);
    std::string text = take_string(report);
    print_json(text, true);
    return json::parse(text).value("pass", false) ? 0 : 1;
  }

  if (*bench_cmd) {
    json request;
    request["docs"] = bench_docs;
    request["queries"] = bench_queries;
    request["seed"] = bench_seed;
    char* report = nullptr;
    if (mms_status s = mms_bench(request.dump().c_str(), &report)) die(s);
    print_json(take_string(report), true);
    return 0;
  }

  if (*synth_cmd) {
    json request;
    request["docs"] = synth_docs;
    request["seed"] = synth_seed;
    request["corpus_path"] = synth_corpus;
    if (!synth_queries.empty()) request["queries_path"] = synth_queries;
    char* summary = nullptr;
    if (mms_status s = mms_synth_corpus(request.dump().c_str(), &summary)) die(s);
    print_json(take_string(summary), true);
    return 0;
  }

  return 0;
}
