#include "mms/intent_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mms/text.hpp"

namespace mms {

IntentGraph IntentGraph::from_nodes(std::vector<IntentNode> nodes) {
  IntentGraph g;
  g.nodes_ = std::move(nodes);
  g.build_maps();
  return g;
}

void IntentGraph::build_maps() {
  by_id_.clear();
  surface_map_.clear();
  max_surface_tokens_ = 0;

  for (size_t i = 0; i < nodes_.size(); ++i) {
    auto& node = nodes_[i];
    if (node.id.empty()) fail(ErrorCode::Config, "intent node with empty id");
    if (!by_id_.emplace(node.id, i).second) {
      fail(ErrorCode::Config, "duplicate intent node id '" + node.id + "'");
    }
    node.label = normalize_join(node.label);
    if (node.label.empty()) {
      fail(ErrorCode::Config, "intent node '" + node.id + "' has an empty label");
    }
  }

  for (size_t i = 0; i < nodes_.size(); ++i) {
    auto& node = nodes_[i];
    if (!node.parent_id.empty() && !by_id_.count(node.parent_id)) {
      fail(ErrorCode::Config,
           "intent node '" + node.id + "' references unknown parent '" + node.parent_id + "'");
    }

    std::set<std::string> surfaces;
    surfaces.insert(node.label);
    std::vector<std::string> normalized_synonyms;
    for (const auto& syn : node.synonyms) {
      std::string s = normalize_join(syn);
      if (s.empty()) fail(ErrorCode::Config, "intent node '" + node.id + "' has an empty synonym");
      if (!surfaces.insert(s).second) {
        fail(ErrorCode::Config,
             "intent node '" + node.id + "' has duplicate surface '" + s + "'");
      }
      normalized_synonyms.push_back(s);
    }
    node.synonyms = std::move(normalized_synonyms);

    for (const auto& s : surfaces) {
      auto [it, fresh] = surface_map_.emplace(s, i);
      if (!fresh && it->second != i) {
        fail(ErrorCode::Config, "surface '" + s + "' maps to both '" + nodes_[it->second].id +
                                    "' and '" + node.id + "'");
      }
      size_t tokens = 1 + static_cast<size_t>(std::count(s.begin(), s.end(), ' '));
      max_surface_tokens_ = std::max(max_surface_tokens_, tokens);
    }
  }

  // Reject parent cycles.
  for (const auto& node : nodes_) {
    std::unordered_set<std::string> seen;
    const IntentNode* cur = &node;
    while (!cur->parent_id.empty()) {
      if (!seen.insert(cur->id).second) {
        fail(ErrorCode::Config, "intent graph has a cycle through '" + node.id + "'");
      }
      cur = &nodes_[by_id_.at(cur->parent_id)];
    }
  }
}

IntentGraph IntentGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open intent graph file '" + path + "'");

  std::vector<IntentNode> nodes;
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
      fail(ErrorCode::Parse, "intent graph line " + std::to_string(line_no) +
                                 ": expected 4 tab-separated fields, got " +
                                 std::to_string(cols.size()));
    }
    IntentNode node;
    node.id = cols[0];
    node.label = cols[1];
    node.parent_id = cols[2];
    if (!cols[3].empty()) {
      std::stringstream ss(cols[3]);
      std::string syn;
      while (std::getline(ss, syn, '|')) {
        if (!syn.empty()) node.synonyms.push_back(syn);
      }
    }
    if (node.id.empty() || node.label.empty()) {
      fail(ErrorCode::Parse,
           "intent graph line " + std::to_string(line_no) + ": id and label are required");
    }
    nodes.push_back(std::move(node));
  }

  try {
    return from_nodes(std::move(nodes));
  } catch (const Error& e) {
    fail(e.code(), std::string(e.what()) + " (file '" + path + "')");
  }
}

void IntentGraph::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write intent graph file '" + path + "'");
  for (const auto& node : nodes_) {
    out << node.id << '\t' << node.label << '\t' << node.parent_id << '\t';
    for (size_t i = 0; i < node.synonyms.size(); ++i) {
      if (i) out << '|';
      out << node.synonyms[i];
    }
    out << '\n';
  }
}

std::set<std::string> IntentGraph::extract(std::string_view text) const {
  std::set<std::string> out;
  const std::vector<std::string> tokens = tokenize(text);
  size_t i = 0;
  while (i < tokens.size()) {
    size_t max_len = std::min(max_surface_tokens_, tokens.size() - i);
    size_t advanced = 0;
    for (size_t len = max_len; len >= 1; --len) {
      std::string surface = tokens[i];
      for (size_t k = 1; k < len; ++k) {
        surface += ' ';
        surface += tokens[i + k];
      }
      auto it = surface_map_.find(surface);
      if (it != surface_map_.end()) {
        out.insert(nodes_[it->second].id);
        advanced = len;
        break;
      }
    }
    i += advanced ? advanced : 1;
  }
  return out;
}

const IntentNode* IntentGraph::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &nodes_[it->second];
}

std::vector<std::string> IntentGraph::path(const std::string& id) const {
  const IntentNode* node = find(id);
  if (!node) fail(ErrorCode::InvalidArgument, "unknown intent node '" + id + "'");
  std::vector<std::string> labels;
  while (true) {
    labels.push_back(node->label);
    if (node->parent_id.empty()) break;
    node = find(node->parent_id);
  }
  std::reverse(labels.begin(), labels.end());
  return labels;
}

const std::string* IntentGraph::lookup_surface(const std::string& normalized_surface) const {
  auto it = surface_map_.find(normalized_surface);
  return it == surface_map_.end() ? nullptr : &nodes_[it->second].id;
}

void IntentGraph::save(ByteWriter& w) const {
  w.put_u64(nodes_.size());
  for (const auto& node : nodes_) {
    w.put_string(node.id);
    w.put_string(node.label);
    w.put_string(node.parent_id);
    w.put_u64(node.synonyms.size());
    for (const auto& s : node.synonyms) w.put_string(s);
  }
}

IntentGraph IntentGraph::load(ByteReader& r) {
  uint64_t n = r.get_u64();
  std::vector<IntentNode> nodes;
  nodes.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    IntentNode node;
    node.id = r.get_string();
    node.label = r.get_string();
    node.parent_id = r.get_string();
    uint64_t n_syn = r.get_u64();
    for (uint64_t k = 0; k < n_syn; ++k) node.synonyms.push_back(r.get_string());
    nodes.push_back(std::move(node));
  }
  return from_nodes(std::move(nodes));
}

void IntentPostings::insert(uint32_t doc_id, const std::vector<std::string>& intent_ids) {
  for (const auto& id : intent_ids) {
    auto& list = postings_[id];
    if (list.empty() || list.back() < doc_id) {
      list.push_back(doc_id);
    } else {
      auto it = std::lower_bound(list.begin(), list.end(), doc_id);
      if (it != list.end() && *it == doc_id) continue;
      list.insert(it, doc_id);
    }
  }
}

std::vector<IntentPostings::Recovered> IntentPostings::recover(
    const std::set<std::string>& query_intents, const std::unordered_set<uint32_t>& exclude,
    size_t limit) const {
  std::vector<Recovered> out;
  if (query_intents.empty() || limit == 0) return out;

  std::unordered_map<uint32_t, uint32_t> counts;
  for (const auto& intent : query_intents) {
    auto it = postings_.find(intent);
    if (it == postings_.end()) continue;
    for (uint32_t doc : it->second) {
      if (!exclude.count(doc)) ++counts[doc];
    }
  }
  out.reserve(counts.size());
  for (const auto& [doc, count] : counts) out.push_back({doc, count});
  std::sort(out.begin(), out.end(), [](const Recovered& a, const Recovered& b) {
    if (a.shared_intents != b.shared_intents) return a.shared_intents > b.shared_intents;
    return a.doc_id < b.doc_id;
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

const std::vector<uint32_t>* IntentPostings::postings_for(const std::string& intent_id) const {
  auto it = postings_.find(intent_id);
  return it == postings_.end() ? nullptr : &it->second;
}

void IntentPostings::save(ByteWriter& w) const {
  w.put_u64(postings_.size());
  for (const auto& [intent, docs] : postings_) {
    w.put_string(intent);
    w.put_u64(docs.size());
    for (uint32_t d : docs) w.put_u32(d);
  }
}

IntentPostings IntentPostings::load(ByteReader& r) {
  IntentPostings p;
  uint64_t n = r.get_u64();
  for (uint64_t i = 0; i < n; ++i) {
    std::string intent = r.get_string();
    uint64_t count = r.get_u64();
    auto& list = p.postings_[intent];
    list.reserve(count);
    uint32_t prev = 0;
    for (uint64_t k = 0; k < count; ++k) {
      uint32_t doc = r.get_u32();
      if (k > 0 && doc <= prev) fail(ErrorCode::CorruptSnapshot, "intent postings not sorted");
      prev = doc;
      list.push_back(doc);
    }
  }
  return p;
}

}  // namespace mms
