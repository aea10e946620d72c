#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "mms/intent_graph.hpp"
#include "mms/text.hpp"

using namespace mms;

namespace {

IntentGraph yoga_graph() {
  return IntentGraph::from_nodes({{"yoga", "yoga", "", {}}});
}

IntentGraph party_graph() {
  return IntentGraph::from_nodes({
      {"halloween", "halloween", "", {}},
      {"birthday", "birthday", "", {}},
      {"birthday_party", "birthday party", "", {}},
  });
}

// Exhaustive reference matcher: left to right, take the maximal surface
// match at each position.
std::set<std::string> oracle_extract(const IntentGraph& graph,
                                     const std::vector<std::string>& tokens) {
  std::set<std::string> out;
  size_t i = 0;
  while (i < tokens.size()) {
    size_t best_len = 0;
    const std::string* best_id = nullptr;
    for (size_t len = 1; i + len <= tokens.size(); ++len) {
      std::string surface = tokens[i];
      for (size_t k = 1; k < len; ++k) surface += " " + tokens[i + k];
      if (const std::string* id = graph.lookup_surface(surface)) {
        if (len >= best_len) {
          best_len = len;
          best_id = id;
        }
      }
    }
    if (best_id) {
      out.insert(*best_id);
      i += best_len;
    } else {
      i += 1;
    }
  }
  return out;
}

std::string temp_path(const char* name) {
  return std::string("/tmp/mms_test_") + name + "_" + std::to_string(::getpid());
}

}  // namespace

TEST_CASE("single-node graph extracts its intent from a longer query") {
  auto graph = yoga_graph();
  CHECK(graph.extract("hot yoga studio opening") == std::set<std::string>{"yoga"});
}

TEST_CASE("empty text extracts nothing") {
  auto graph = yoga_graph();
  CHECK(graph.extract("").empty());
  CHECK(graph.extract("!!!").empty());
}

TEST_CASE("longest surface wins over its sub-spans") {
  auto graph = party_graph();
  auto intents = graph.extract("halloween birthday party");
  CHECK(intents == std::set<std::string>{"halloween", "birthday_party"});
}

TEST_CASE("extraction matches the exhaustive span oracle") {
  auto graph = party_graph();
  std::mt19937_64 rng(66);
  const std::vector<std::string> words = {"halloween", "birthday", "party", "cake", "pink",
                                          "spooky",    "fun",      "card"};
  std::uniform_int_distribution<size_t> word(0, words.size() - 1);
  std::uniform_int_distribution<int> len(0, 8);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> tokens;
    int n = len(rng);
    for (int i = 0; i < n; ++i) tokens.push_back(words[word(rng)]);
    CHECK(graph.extract(join_tokens(tokens)) == oracle_extract(graph, tokens));
  }
}

TEST_CASE("extraction is invariant under casing and whitespace") {
  auto graph = party_graph();
  auto a = graph.extract("halloween birthday party");
  CHECK(graph.extract("  Halloween   BIRTHDAY  party!! ") == a);
  CHECK(graph.extract("halloween\tbirthday\nparty") == a);
}

TEST_CASE("synonyms map to their node") {
  auto graph = IntentGraph::from_nodes({{"july4", "4th of july", "", {"fourth of july"}}});
  CHECK(graph.extract("fourth of july sale") == std::set<std::string>{"july4"});
  CHECK(graph.extract("4th of july sale") == std::set<std::string>{"july4"});
}

TEST_CASE("graph validation rejects structural breakage") {
  // cycle
  CHECK_THROWS_AS(IntentGraph::from_nodes({{"a", "a", "b", {}}, {"b", "b", "a", {}}}), Error);
  // dangling parent
  CHECK_THROWS_AS(IntentGraph::from_nodes({{"a", "a", "missing", {}}}), Error);
  // duplicate id
  CHECK_THROWS_AS(IntentGraph::from_nodes({{"a", "a", "", {}}, {"a", "b", "", {}}}), Error);
  // empty label
  CHECK_THROWS_AS(IntentGraph::from_nodes({{"a", "!!!", "", {}}}), Error);
  // duplicate surface within a node
  CHECK_THROWS_AS(IntentGraph::from_nodes({{"a", "fun", "", {"Fun"}}}), Error);
  // same surface on two nodes
  CHECK_THROWS_AS(
      IntentGraph::from_nodes({{"a", "fun", "", {}}, {"b", "games", "", {"fun"}}}), Error);
}

TEST_CASE("path follows the parent chain") {
  auto graph = IntentGraph::builtin_fixture();
  auto path = graph.path("events.seasonal.halloween");
  REQUIRE(path.size() == 3);
  CHECK(path[0] == "events");
  CHECK(path[1] == "seasonal");
  CHECK(path[2] == "halloween");
}

TEST_CASE("builtin fixture covers the taxonomy families") {
  auto graph = IntentGraph::builtin_fixture();
  CHECK(graph.node_count() >= 100);
  for (const char* id : {"events", "actions", "objects", "moods", "canvas", "colors",
                         "backgrounds", "actions.yoga", "events.seasonal.halloween"}) {
    CHECK(graph.has_node(id));
  }
  CHECK(graph.extract("hot yoga studio") == std::set<std::string>{"actions.yoga"});
  // "beach background" must beat the bare object "beach".
  CHECK(graph.extract("beach background card") ==
        std::set<std::string>{"backgrounds.beach", "canvas.card"});
}

TEST_CASE("graph file round-trip and line-numbered errors") {
  auto graph = IntentGraph::builtin_fixture();
  std::string path = temp_path("graph.tsv");
  graph.save_file(path);
  auto loaded = IntentGraph::load_file(path);
  CHECK(loaded.node_count() == graph.node_count());
  CHECK(loaded.extract("pink unicorn birthday") == graph.extract("pink unicorn birthday"));
  std::remove(path.c_str());

  std::ofstream bad(path);
  bad << "a\tlabel a\t\n";  // 3 fields instead of 4
  bad.close();
  try {
    IntentGraph::load_file(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("recover scores by shared intent count") {
  IntentPostings postings;
  postings.insert(0, {"yoga", "opening"});
  postings.insert(1, {"yoga"});
  postings.insert(2, {"pilates"});

  auto hits = postings.recover({"yoga", "opening"}, {}, SIZE_MAX);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].doc_id == 0);
  CHECK(hits[0].shared_intents == 2);
  CHECK(hits[1].doc_id == 1);
  CHECK(hits[1].shared_intents == 1);
}

TEST_CASE("recover returns all documents tagged with the query intent") {
  IntentPostings postings;
  postings.insert(3, {"yoga"});
  postings.insert(7, {"yoga"});
  postings.insert(9, {"sale"});
  auto hits = postings.recover({"yoga"}, {}, SIZE_MAX);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].doc_id == 3);
  CHECK(hits[1].doc_id == 7);
}

TEST_CASE("recover respects the exclude set and empty query intents") {
  IntentPostings postings;
  postings.insert(0, {"yoga"});
  postings.insert(1, {"yoga"});
  CHECK(postings.recover({}, {}, SIZE_MAX).empty());
  auto hits = postings.recover({"yoga"}, {0}, SIZE_MAX);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].doc_id == 1);
}

TEST_CASE("recovery soundness on random corpora") {
  std::mt19937_64 rng(909);
  const std::vector<std::string> intents = {"a", "b", "c", "d", "e"};
  std::uniform_int_distribution<size_t> pick(0, intents.size() - 1);
  std::uniform_int_distribution<int> n_intents(0, 3);

  IntentPostings postings;
  std::vector<std::set<std::string>> tagged(100);
  for (uint32_t doc = 0; doc < 100; ++doc) {
    int n = n_intents(rng);
    std::vector<std::string> ids;
    for (int k = 0; k < n; ++k) {
      auto id = intents[pick(rng)];
      if (tagged[doc].insert(id).second) ids.push_back(id);
    }
    postings.insert(doc, ids);
  }

  for (int q = 0; q < 50; ++q) {
    std::set<std::string> query = {intents[pick(rng)], intents[pick(rng)]};
    std::unordered_set<uint32_t> exclude = {1, 2, 3};
    for (const auto& hit : postings.recover(query, exclude, SIZE_MAX)) {
      CHECK(exclude.count(hit.doc_id) == 0);
      size_t shared = 0;
      for (const auto& id : query) shared += tagged[hit.doc_id].count(id);
      CHECK(shared == hit.shared_intents);
      CHECK(shared >= 1);
    }
  }
}

TEST_CASE("intent postings serialization round-trips") {
  IntentPostings postings;
  postings.insert(0, {"yoga", "sale"});
  postings.insert(5, {"yoga"});
  ByteWriter w;
  postings.save(w);
  ByteReader r(w.bytes());
  auto loaded = IntentPostings::load(r);
  CHECK(r.done());
  auto hits = loaded.recover({"yoga"}, {}, SIZE_MAX);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].doc_id == 0);
  CHECK(hits[1].doc_id == 5);
}
