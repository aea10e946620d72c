#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mms/serialize.hpp"

namespace mms {

// A node in the hierarchical creative knowledge graph. Labels and synonyms
// are stored in canonical token-normalized form.
struct IntentNode {
  std::string id;
  std::string label;
  std::string parent_id;  // empty for roots
  std::vector<std::string> synonyms;
};

// Immutable after construction. Surface strings (labels and synonyms) map
// to exactly one node each; extraction is a greedy longest-match scan over
// the tokenized input.
class IntentGraph {
 public:
  IntentGraph() = default;

  static IntentGraph from_nodes(std::vector<IntentNode> nodes);

  // Line format: id <TAB> label <TAB> parent_id-or-empty <TAB> syn1|syn2
  // Blank lines and lines starting with '#' are skipped. Errors carry the
  // offending line number.
  static IntentGraph load_file(const std::string& path);
  void save_file(const std::string& path) const;

  // The ~100-node taxonomy shipped with the engine: events, actions,
  // objects, moods, canvas types, colors and backgrounds.
  static IntentGraph builtin_fixture();

  std::set<std::string> extract(std::string_view text) const;

  bool has_node(const std::string& id) const { return by_id_.count(id) > 0; }
  const IntentNode* find(const std::string& id) const;
  std::vector<std::string> path(const std::string& id) const;  // root..node labels
  const std::string* lookup_surface(const std::string& normalized_surface) const;

  size_t node_count() const { return nodes_.size(); }
  const std::vector<IntentNode>& nodes() const { return nodes_; }

  void save(ByteWriter& w) const;
  static IntentGraph load(ByteReader& r);

 private:
  void build_maps();

  std::vector<IntentNode> nodes_;
  std::unordered_map<std::string, size_t> by_id_;
  std::map<std::string, size_t> surface_map_;  // normalized surface -> node index
  size_t max_surface_tokens_ = 0;
};

// Intent id -> sorted document ordinals, for null/low recovery.
class IntentPostings {
 public:
  void insert(uint32_t doc_id, const std::vector<std::string>& intent_ids);

  struct Recovered {
    uint32_t doc_id = 0;
    uint32_t shared_intents = 0;
  };

  // Documents sharing at least one intent with the query, scored by the
  // number of shared intents, ties by ascending doc_id, excluding `exclude`.
  std::vector<Recovered> recover(const std::set<std::string>& query_intents,
                                 const std::unordered_set<uint32_t>& exclude, size_t limit) const;

  const std::vector<uint32_t>* postings_for(const std::string& intent_id) const;

  void save(ByteWriter& w) const;
  static IntentPostings load(ByteReader& r);

 private:
  std::map<std::string, std::vector<uint32_t>> postings_;
};

}  // namespace mms
