#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mms/eval.hpp"
#include "mms/template_record.hpp"

namespace mms {

// Seeded synthetic corpus with designed coverage gaps: most templates are
// reachable by keyword and embedding recall, while a reserved vocabulary
// (intent tags that never appear in template text) makes the crafted null
// query set recoverable only through the intent graph.
struct SynthOptions {
  uint64_t seed = 20240401;
  size_t doc_count = 1000;
  double recovery_fraction = 0.05;  // docs tagged with reserved intents
  size_t head_query_count = 50;     // two-word queries over common vocab
  size_t tail_query_count = 50;     // five-word queries, route LONG
  size_t null_query_count = 40;     // three-word queries over reserved vocab
  size_t clicked_query_count = 30;  // queries with simulated clicked-relevant docs
};

struct SynthCorpus {
  std::vector<TemplateRecord> docs;
  std::vector<std::string> head_queries;
  std::vector<std::string> tail_queries;
  std::vector<std::string> null_queries;
  EvalQuerySet clicked_queries;
};

SynthCorpus generate_synth_corpus(const SynthOptions& options);

void write_corpus_jsonl(const std::vector<TemplateRecord>& docs, const std::string& path);

std::string format_iso_date(int64_t days_since_epoch);

}  // namespace mms
