#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mms/engine.hpp"
#include "mms/text.hpp"

using namespace mms;

namespace {

EngineConfig fixture_config() {
  EngineConfig cfg = EngineConfig::defaults();
  cfg.spaces = {
      {"text_image", 128, 512, 101, 8},
      {"intent", 128, 512, 202, 8},
  };
  return cfg;
}

TemplateRecord record(const std::string& id, const std::string& title,
                      std::vector<std::string> topics, std::vector<std::string> intents,
                      const std::string& date = "2023-06-01") {
  TemplateRecord r;
  r.id = id;
  r.title = title;
  r.topics = std::move(topics);
  r.intents = std::move(intents);
  r.date = date;
  return r;
}

std::vector<TemplateRecord> fixture_records() {
  std::vector<TemplateRecord> docs;
  docs.push_back(record("fig2", "Pink Unicorn Birthday Party Instagram Portrait Post",
                        {"confetti", "fantasy", "glitter", "gold", "kids", "sparkle", "star",
                         "unicorn"},
                        {"events.birthday", "objects.unicorn"}, "2023-12-12"));
  docs.back().mood = {"happy", "joyful"};
  docs.back().style = {"bright"};
  docs.back().license = "premium";
  docs.push_back(record("coffee1", "Coffee Shop Instagram Post", {"coffee", "cafe"},
                        {"objects.coffee"}, "2023-06-01"));
  docs.push_back(record("coffee2", "Modern Coffee Promotion Flyer", {"coffee", "promo"},
                        {"objects.coffee", "canvas.flyer"}, "2023-08-15"));
  docs.push_back(
      record("yoga1", "Sunrise Flow Poster", {"wellness", "morning"}, {"actions.yoga"}));
  docs.push_back(
      record("yoga2", "Morning Stretch Banner", {"wellness"}, {"actions.yoga"}, "2023-03-02"));
  docs.push_back(record("wed1", "Elegant Gold Wedding Invitation", {"wedding", "gold"},
                        {"events.wedding", "canvas.invitation"}, "2023-01-20"));
  docs.push_back(record("wed2", "Elegant Gold Ceremony Invitation", {"ceremony"},
                        {"events.wedding", "canvas.invitation"}, "2023-02-10"));
  docs.push_back(record("sale1", "Black Friday Mega Sale Banner", {"sale", "discount"},
                        {"actions.sale"}, "2023-11-01"));
  docs.back().behavior = "animated";
  docs.push_back(record("cat1", "Cute Cat Birthday Card", {"cat", "kitten"},
                        {"objects.cat", "events.birthday"}, "2023-05-05"));
  return docs;
}

Engine fixture_engine(EngineConfig cfg = fixture_config()) {
  Engine engine(std::move(cfg));
  auto report = engine.ingest_records(fixture_records());
  REQUIRE(report.indexed == 9);
  REQUIRE(report.errors.empty());
  return engine;
}

double dot_f(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

}  // namespace

TEST_CASE("routing by word count") {
  auto engine = fixture_engine();
  CHECK(engine.plan("coffee instagram", {}).route == QueryPlan::Route::Hybrid);
  CHECK(engine.plan("coffee instagram", {}).word_count == 2);
  CHECK(engine.plan("colorful coffee promotion instagram", {}).route == QueryPlan::Route::Long);
  CHECK(engine.plan("happy new year", {}).route == QueryPlan::Route::Hybrid);
  CHECK(engine.plan("one two three four five", {}).route == QueryPlan::Route::Long);
}

TEST_CASE("plan extracts intents and rejects empty queries") {
  auto engine = fixture_engine();
  auto plan = engine.plan("pink unicorn birthday card", {});
  CHECK(plan.intents.count("colors.pink"));
  CHECK(plan.intents.count("objects.unicorn"));
  CHECK(plan.intents.count("events.birthday"));
  CHECK(plan.intents.count("canvas.card"));

  CHECK_THROWS_AS(engine.plan("", {}), Error);
  try {
    engine.plan("...", {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyQuery);
  }
}

TEST_CASE("searching before a snapshot is built fails") {
  Engine engine(fixture_config());
  SearchRequest req;
  req.query = "coffee";
  CHECK_THROWS_AS(engine.search(req), Error);
  try {
    engine.search(req);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SnapshotNotLoaded);
  }
}

TEST_CASE("a template's own title retrieves it first on the long route") {
  auto engine = fixture_engine();
  SearchRequest req;
  req.query = "Coffee Shop Instagram Post";  // 4 words: long route
  auto resp = engine.search(req);
  CHECK(resp.plan.route == QueryPlan::Route::Long);
  REQUIRE(!resp.results.empty());
  CHECK(resp.results[0].id == "coffee1");
  CHECK(resp.results[0].long_path);
}

TEST_CASE("hybrid search unions keyword and sparse recall with provenance") {
  auto engine = fixture_engine();
  SearchRequest req;
  req.query = "coffee instagram";
  auto resp = engine.search(req);
  CHECK(resp.plan.route == QueryPlan::Route::Hybrid);
  CHECK(!resp.results.empty());
  for (const auto& r : resp.results) {
    CHECK((r.keyword || r.sparse || r.recovery));
    CHECK_FALSE(r.long_path);
  }
  // Keyword-strongest documents are the two coffee templates.
  REQUIRE(resp.results.size() >= 2);
  CHECK((resp.results[0].id == "coffee1" || resp.results[0].id == "coffee2"));
  // No duplicates.
  std::set<std::string> ids;
  for (const auto& r : resp.results) CHECK(ids.insert(r.id).second);
}

TEST_CASE("query hitting no recall path yields an empty null response") {
  auto cfg = fixture_config();
  cfg.min_dims = 9;  // unreachable: sparsifier keeps at most 8 entries
  Engine engine(std::move(cfg));
  engine.ingest_records(fixture_records());

  SearchRequest req;
  req.query = "zzzqq wwxxy";
  auto resp = engine.search(req);
  CHECK(resp.organic_count == 0);
  CHECK(resp.total_count == 0);
  CHECK(resp.null_page);
  CHECK(resp.low_page);
  CHECK_FALSE(resp.recovery_applied);
  CHECK(resp.results.empty());
}

TEST_CASE("intent recovery fills a null page") {
  auto cfg = fixture_config();
  cfg.min_dims = 9;              // no sparse recall
  cfg.long_query_min_words = 5;  // keep the four-word query on the hybrid route
  Engine engine(std::move(cfg));
  engine.ingest_records(fixture_records());

  SearchRequest req;
  req.query = "hot yoga studio opening";
  auto resp = engine.search(req);
  CHECK(resp.plan.route == QueryPlan::Route::Hybrid);
  CHECK(resp.plan.intents.count("actions.yoga"));
  CHECK(resp.organic_count == 0);
  REQUIRE(resp.total_count == 2);
  CHECK(resp.recovery_applied);
  CHECK_FALSE(resp.null_page);  // the recovered page is not null
  CHECK(resp.results[0].id == "yoga1");
  CHECK(resp.results[1].id == "yoga2");
  CHECK(resp.results[0].recovery);
  CHECK(resp.results[1].recovery);

  // Recovery disabled: same query is a null page.
  req.recovery = false;
  auto off = engine.search(req);
  CHECK(off.total_count == 0);
  CHECK(off.null_page);
}

TEST_CASE("recovery appends after organic results without reordering them") {
  auto engine = fixture_engine();
  SearchRequest req;
  req.query = "unicorn birthday";  // keyword-matches a couple of documents

  req.recovery = false;
  auto off = engine.search(req);
  req.recovery = true;
  auto on = engine.search(req);

  CHECK(on.organic_count == off.organic_count);
  REQUIRE(on.total_count >= off.total_count);
  for (size_t i = 0; i < off.organic_count; ++i) {
    CHECK(on.results[i].id == off.results[i].id);
    CHECK(on.results[i].score == off.results[i].score);
  }
  for (size_t i = on.organic_count; i < on.results.size(); ++i) {
    CHECK(on.results[i].recovery);
  }
}

TEST_CASE("recovered documents share an intent with the query") {
  auto cfg = fixture_config();
  cfg.min_dims = 9;
  Engine engine(std::move(cfg));
  engine.ingest_records(fixture_records());

  SearchRequest req;
  req.query = "wedding";  // single word, hybrid; kw matches wed1 only -> low page
  auto resp = engine.search(req);
  CHECK(resp.organic_count == 1);
  CHECK(resp.recovery_applied);
  for (size_t i = resp.organic_count; i < resp.results.size(); ++i) {
    const auto* ord = engine.ordinal_of(resp.results[i].id) ? &resp.results[i] : nullptr;
    REQUIRE(ord != nullptr);
    const auto& doc = engine.doc(*engine.ordinal_of(resp.results[i].id));
    CHECK(std::find(doc.intent_ids.begin(), doc.intent_ids.end(), "events.wedding") !=
          doc.intent_ids.end());
  }
}

TEST_CASE("long route scores every filtered document with the dual-space blend") {
  auto engine = fixture_engine();
  const auto& cfg = engine.config();
  auto q_primary = engine.embed_query("elegant gold wedding invitation card", cfg.primary_space);
  auto q_intent = engine.embed_query("elegant gold wedding invitation card", cfg.intent_space);

  auto hits = engine.long_query_scan(q_primary, q_intent, {});
  REQUIRE(hits.size() == engine.doc_count());

  // Independent recomputation of the blend.
  const size_t pi = engine.space_index(cfg.primary_space);
  const size_t ii = engine.space_index(cfg.intent_space);
  const double w = cfg.rescore.long_query_intent_weight;
  std::vector<Engine::LongHit> expected;
  for (uint32_t ord = 0; ord < engine.doc_count(); ++ord) {
    Engine::LongHit h;
    h.doc_id = ord;
    h.sim_primary = dot_f(q_primary.values, engine.doc(ord).dense[pi]);
    h.sim_intent = dot_f(q_intent.values, engine.doc(ord).dense[ii]);
    h.blend = w * h.sim_intent + (1.0 - w) * h.sim_primary;
    expected.push_back(h);
  }
  std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
    if (a.blend != b.blend) return a.blend > b.blend;
    return a.doc_id < b.doc_id;
  });
  for (size_t i = 0; i < hits.size(); ++i) {
    CHECK(hits[i].doc_id == expected[i].doc_id);
    CHECK(hits[i].blend == expected[i].blend);  // bitwise
  }
}

TEST_CASE("long route singleton corpus returns the exact blended cosine") {
  Engine engine(fixture_config());
  engine.ingest_records({record("only", "Cozy Autumn Reading Nook Poster", {"book"}, {})});
  auto q_primary = engine.embed_query("warm book corner", engine.config().primary_space);
  auto q_intent = engine.embed_query("warm book corner", engine.config().intent_space);
  auto hits = engine.long_query_scan(q_primary, q_intent, {});
  REQUIRE(hits.size() == 1);
  const double w = engine.config().rescore.long_query_intent_weight;
  double expected = w * hits[0].sim_intent + (1.0 - w) * hits[0].sim_primary;
  CHECK(hits[0].blend == expected);
}

TEST_CASE("filters exclude documents on every route") {
  auto engine = fixture_engine();

  FilterSpec premium;
  premium.license = "premium";
  SearchRequest req;
  req.query = "coffee instagram";
  req.filters = premium;
  auto resp = engine.search(req);
  for (const auto& r : resp.results) {
    const auto& attrs = engine.keyword_index().attributes(*engine.ordinal_of(r.id));
    CHECK(attrs.license == "premium");
  }

  FilterSpec video;
  video.behavior = "video";
  auto q_primary = engine.embed_query("anything at all really", engine.config().primary_space);
  auto q_intent = engine.embed_query("anything at all really", engine.config().intent_space);
  CHECK(engine.long_query_scan(q_primary, q_intent, video).empty());

  FilterSpec bad;
  bad.behavior = "gif";
  CHECK_THROWS_AS(engine.plan("coffee", bad), Error);
}

TEST_CASE("long_query_scan validates query spaces") {
  auto engine = fixture_engine();
  auto q_primary = engine.embed_query("a b", engine.config().primary_space);
  CHECK_THROWS_AS(engine.long_query_scan(q_primary, q_primary, {}), Error);
}

TEST_CASE("pagination slices the final ranking") {
  auto engine = fixture_engine();
  SearchRequest req;
  req.query = "birthday card poster banner";  // long route: every doc scores
  req.page_size = 3;
  auto page0 = engine.search(req);
  REQUIRE(page0.results.size() == 3);
  CHECK(page0.total_count == 9);
  req.page = 1;
  auto page1 = engine.search(req);
  REQUIRE(page1.results.size() == 3);
  CHECK(page1.results[0].id != page0.results[0].id);

  req.page = 0;
  req.page_size = 1000;
  auto all = engine.search(req);
  CHECK(all.results.size() == 9);
  CHECK(all.results[3].id == page1.results[0].id);
}

TEST_CASE("explain mode surfaces component scores") {
  auto engine = fixture_engine();
  SearchRequest req;
  req.query = "coffee instagram";
  req.explain = true;
  auto resp = engine.search(req);
  REQUIRE(!resp.results.empty());
  REQUIRE(resp.results[0].explain.has_value());
  const auto& ex = *resp.results[0].explain;
  CHECK(ex.rescored);
  CHECK(ex.first_round >= 0.0);
  CHECK(ex.sim_primary != 0.0);

  req.explain = false;
  auto plain = engine.search(req);
  CHECK_FALSE(plain.results[0].explain.has_value());
}

TEST_CASE("responses are byte-identical across repeated searches") {
  auto engine = fixture_engine();
  for (const char* query : {"coffee instagram", "pink unicorn birthday party card", "wedding"}) {
    SearchRequest req;
    req.query = query;
    req.explain = true;
    auto a = engine.search(req).to_json_text();
    auto b = engine.search(req).to_json_text();
    CHECK(a == b);
  }
}

TEST_CASE("two engines built from the same records agree byte for byte") {
  auto a = fixture_engine();
  auto b = fixture_engine();
  CHECK(a.digest() == b.digest());
  SearchRequest req;
  req.query = "gold wedding";
  CHECK(a.search(req).to_json_text() == b.search(req).to_json_text());
}

TEST_CASE("long hybrid union config pushes long queries through the hybrid path") {
  auto cfg = fixture_config();
  cfg.long_hybrid_union = true;
  Engine engine(std::move(cfg));
  engine.ingest_records(fixture_records());

  SearchRequest req;
  req.query = "modern coffee promotion flyer";  // 4 words
  req.explain = true;
  auto resp = engine.search(req);
  CHECK(resp.plan.route == QueryPlan::Route::Long);
  REQUIRE(!resp.results.empty());
  CHECK_FALSE(resp.results[0].long_path);  // hybrid machinery produced it
  // The blended similarity uses both spaces on this path.
  CHECK(resp.results[0].explain->sim_intent != 0.0);
}
