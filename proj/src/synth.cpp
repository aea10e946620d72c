#include "mms/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "mms/intent_graph.hpp"
#include "mms/text.hpp"

namespace mms {

namespace {

struct Word {
  const char* text;
  const char* intent;  // node id in the builtin graph, or nullptr
};

constexpr Word kMoods[] = {
    {"happy", "moods.happy"},     {"joyful", "moods.joyful"},   {"elegant", "moods.elegant"},
    {"minimal", "moods.minimal"}, {"bold", "moods.bold"},       {"playful", "moods.playful"},
    {"vintage", "moods.vintage"}, {"modern", "moods.modern"},   {"cozy", "moods.cozy"},
    {"bright", "moods.bright"},   {"calm", "moods.calm"},       {"romantic", "moods.romantic"},
};

constexpr Word kColors[] = {
    {"pink", "colors.pink"},     {"gold", "colors.gold"},     {"blue", "colors.blue"},
    {"green", "colors.green"},   {"black", "colors.black"},   {"white", "colors.white"},
    {"pastel", "colors.pastel"}, {"neon", "colors.neon"},     {"red", "colors.red"},
    {"purple", "colors.purple"}, {"orange", "colors.orange"}, {"silver", "colors.silver"},
};

constexpr Word kObjects[] = {
    {"coffee", "objects.coffee"},     {"unicorn", "objects.unicorn"}, {"cat", "objects.cat"},
    {"dog", "objects.dog"},           {"beach", "objects.beach"},     {"mountain", "objects.mountain"},
    {"flower", "objects.flower"},     {"cake", "objects.cake"},       {"balloon", "objects.balloon"},
    {"guitar", "objects.guitar"},     {"pizza", "objects.pizza"},     {"book", "objects.book"},
    {"car", "objects.car"},           {"heart", "objects.heart"},     {"star", "objects.star"},
    {"sun", "objects.sun"},           {"moon", "objects.moon"},       {"tree", "objects.tree"},
    {"gift", "objects.gift"},         {"camera", "objects.camera"},   {"family", "objects.family"},
};

constexpr Word kEvents[] = {
    {"birthday", "events.birthday"},       {"wedding", "events.wedding"},
    {"graduation", "events.graduation"},   {"anniversary", "events.anniversary"},
    {"halloween", "events.seasonal.halloween"},
    {"thanksgiving", "events.seasonal.thanksgiving"},
    {"christmas", "events.seasonal.christmas"},
    {"easter", "events.seasonal.easter"},
};

constexpr Word kActions[] = {
    {"yoga", "actions.yoga"},         {"cooking", "actions.cooking"},
    {"workout", "actions.workout"},   {"sale", "actions.sale"},
    {"party", "actions.party"},       {"celebration", "actions.celebration"},
    {"travel", "actions.travel"},     {"shopping", "actions.shopping"},
    {"baking", "actions.baking"},     {"gardening", "actions.gardening"},
    {"hiking", "actions.hiking"},     {"dance", "actions.dance"},
};

constexpr Word kCanvas[] = {
    {"poster", "canvas.poster"},         {"flyer", "canvas.flyer"},
    {"card", "canvas.card"},             {"invitation", "canvas.invitation"},
    {"banner", "canvas.banner"},         {"logo", "canvas.logo"},
    {"menu", "canvas.menu"},             {"resume", "canvas.resume"},
    {"newsletter", "canvas.newsletter"}, {"collage", "canvas.collage"},
    {"brochure", "canvas.brochure"},     {"wallpaper", "canvas.wallpaper"},
};

// Reserved intents: tagged on a slice of templates but their surfaces never
// appear in template text, so only intent recovery can reach them.
constexpr Word kReservedActions[] = {
    {"meditation", "actions.meditation"}, {"astrology", "actions.astrology"},
    {"karaoke", "actions.karaoke"},       {"origami", "actions.origami"},
    {"journaling", "actions.journaling"}, {"pottery", "actions.pottery"},
    {"calligraphy", "actions.calligraphy"},
};

// Never in template text and not graph surfaces, so they defeat keyword
// recall without producing intents.
constexpr const char* kReservedFillers[] = {"hot",  "session", "tonight", "weekly",
                                            "club", "near",    "downtown"};

constexpr const char* kFillers[] = {"promo",    "promotion", "template", "creative",
                                    "layout",   "bundle",    "kit",      "pack",
                                    "theme",    "idea",      "special",  "deluxe"};

constexpr const char* kStyles[] = {"clean",  "classic", "rustic",  "geometric",
                                   "editorial", "organic", "sketchy", "textured"};

constexpr const char* kRegions[] = {"US", "EU", "JP", "IN"};
constexpr const char* kLanguages[] = {"fr-FR", "de-DE", "ja-JP", "ko-KR"};

// Skewed index in [0, n): favors small indices so some vocabulary is
// head-heavy and the rest sits in the tail.
size_t zipfish(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng);
  return std::min(n - 1, static_cast<size_t>(x * x * static_cast<double>(n)));
}

// Unique pronounceable marker words (four consonant-vowel syllables), so
// every title is distinct and self-retrieval is unambiguous.
std::string marker_word(uint64_t index) {
  static const char* consonants = "bdfgklmnprstvz";
  static const char* vowels = "aeiou";
  std::string word;
  for (int s = 0; s < 4; ++s) {
    word.push_back(consonants[index % 14]);
    index /= 14;
    word.push_back(vowels[index % 5]);
    index /= 5;
  }
  return word;
}

}  // namespace

std::string format_iso_date(int64_t z) {
  // Inverse of days_from_civil (proleptic Gregorian).
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const uint64_t doe = static_cast<uint64_t>(z - era * 146097);
  const uint64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t y = static_cast<int64_t>(yoe) + era * 400;
  const uint64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const uint64_t mp = (5 * doy + 2) / 153;
  const uint64_t d = doy - (153 * mp + 2) / 5 + 1;
  const uint64_t m = mp < 10 ? mp + 3 : mp - 9;
  const int64_t year = m <= 2 ? y + 1 : y;

  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04lld-%02llu-%02llu", static_cast<long long>(year),
                static_cast<unsigned long long>(m), static_cast<unsigned long long>(d));
  return std::string(buf);
}

SynthCorpus generate_synth_corpus(const SynthOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  SynthCorpus corpus;
  corpus.docs.reserve(options.doc_count);

  uint64_t marker_counter = 0;
  const int64_t date_lo = parse_iso_date_days("2022-01-01");
  const int64_t date_hi = parse_iso_date_days("2024-06-30");

  for (size_t i = 0; i < options.doc_count; ++i) {
    const Word& mood = kMoods[zipfish(rng, std::size(kMoods))];
    const Word& color = kColors[zipfish(rng, std::size(kColors))];
    const bool use_action = u(rng) < 0.3;
    const Word& object = kObjects[zipfish(rng, std::size(kObjects))];
    const Word& action = kActions[zipfish(rng, std::size(kActions))];
    const Word& event = kEvents[zipfish(rng, std::size(kEvents))];
    const Word& canvas = kCanvas[zipfish(rng, std::size(kCanvas))];
    const Word& subject = use_action ? action : object;

    TemplateRecord doc;
    doc.id = "t" + std::to_string(i);

    std::vector<std::string> title_words = {mood.text, color.text, subject.text, event.text,
                                            canvas.text};
    if (u(rng) < 0.4) title_words.push_back(kFillers[zipfish(rng, std::size(kFillers))]);
    title_words.push_back(marker_word(marker_counter++));
    title_words.push_back(marker_word(marker_counter++));
    doc.title = join_tokens(title_words);

    doc.topics = {subject.text, event.text, canvas.text};
    const Word& extra_topic = kObjects[zipfish(rng, std::size(kObjects))];
    if (std::string(extra_topic.text) != subject.text) doc.topics.push_back(extra_topic.text);
    doc.mood = {mood.text};
    doc.style = {kStyles[zipfish(rng, std::size(kStyles))]};

    std::set<std::string> intents = {mood.intent, color.intent, subject.intent, event.intent,
                                     canvas.intent};
    if (std::string(extra_topic.text) != subject.text) intents.insert(extra_topic.intent);
    if (u(rng) < options.recovery_fraction) {
      intents.insert(kReservedActions[zipfish(rng, std::size(kReservedActions))].intent);
    }
    doc.intents.assign(intents.begin(), intents.end());

    doc.region = u(rng) < 0.85 ? "all" : kRegions[zipfish(rng, std::size(kRegions))];
    doc.language = u(rng) < 0.85 ? "en-US" : kLanguages[zipfish(rng, std::size(kLanguages))];
    double behavior_roll = u(rng);
    doc.behavior = behavior_roll < 0.7 ? "still" : behavior_roll < 0.9 ? "animated" : "video";
    doc.license = u(rng) < 0.6 ? "free" : "premium";
    doc.date = format_iso_date(
        date_lo + static_cast<int64_t>(u(rng) * static_cast<double>(date_hi - date_lo)));

    doc.impressions = static_cast<uint64_t>(u(rng) * u(rng) * 100000.0);
    doc.clicks = static_cast<uint64_t>(static_cast<double>(doc.impressions) * 0.1 * u(rng));
    doc.edits = static_cast<uint64_t>(static_cast<double>(doc.clicks) * 0.5 * u(rng));
    doc.exports = static_cast<uint64_t>(static_cast<double>(doc.edits) * 0.6 * u(rng));

    corpus.docs.push_back(std::move(doc));
  }

  for (size_t i = 0; i < options.head_query_count; ++i) {
    const Word& object = kObjects[zipfish(rng, std::size(kObjects))];
    const Word& canvas = kCanvas[zipfish(rng, std::size(kCanvas))];
    corpus.head_queries.push_back(std::string(object.text) + " " + canvas.text);
  }

  for (size_t i = 0; i < options.tail_query_count; ++i) {
    const Word& mood = kMoods[zipfish(rng, std::size(kMoods))];
    const Word& color = kColors[zipfish(rng, std::size(kColors))];
    const Word& object = kObjects[zipfish(rng, std::size(kObjects))];
    const Word& event = kEvents[zipfish(rng, std::size(kEvents))];
    const Word& canvas = kCanvas[zipfish(rng, std::size(kCanvas))];
    corpus.tail_queries.push_back(std::string(mood.text) + " " + color.text + " " + object.text +
                                  " " + event.text + " " + canvas.text);
  }

  // Three-word queries (hybrid route) built entirely from reserved
  // vocabulary: keyword and sparse recall find nothing, and only the
  // queries carrying a reserved intent surface can recover.
  for (size_t i = 0; i < options.null_query_count; ++i) {
    const char* f1 = kReservedFillers[zipfish(rng, std::size(kReservedFillers))];
    const char* f2 = kReservedFillers[zipfish(rng, std::size(kReservedFillers))];
    if (i % 2 == 0) {
      const Word& reserved = kReservedActions[zipfish(rng, std::size(kReservedActions))];
      corpus.null_queries.push_back(std::string(f1) + " " + reserved.text + " " + f2);
    } else {
      const char* f3 = kReservedFillers[zipfish(rng, std::size(kReservedFillers))];
      corpus.null_queries.push_back(std::string(f1) + " " + f2 + " " + f3);
    }
  }

  // Clicked-as-relevant simulation: for a two-word query, the "clicked"
  // documents are the highest-engagement templates containing both words
  // in the title.
  for (size_t i = 0; i < options.clicked_query_count; ++i) {
    const Word& object = kObjects[zipfish(rng, std::size(kObjects))];
    const Word& canvas = kCanvas[zipfish(rng, std::size(kCanvas))];
    EvalQuery q;
    q.query = std::string(object.text) + " " + canvas.text;

    std::vector<std::pair<uint64_t, std::string>> matching;
    for (const auto& doc : corpus.docs) {
      auto tokens = tokenize(doc.title);
      bool has_object = std::find(tokens.begin(), tokens.end(), object.text) != tokens.end();
      bool has_canvas = std::find(tokens.begin(), tokens.end(), canvas.text) != tokens.end();
      if (has_object && has_canvas) matching.emplace_back(doc.edits + doc.exports, doc.id);
    }
    std::sort(matching.begin(), matching.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (size_t k = 0; k < matching.size() && k < 5; ++k) {
      q.expected_ids.push_back(matching[k].second);
    }
    if (!q.expected_ids.empty()) corpus.clicked_queries.queries.push_back(std::move(q));
  }

  return corpus;
}

void write_corpus_jsonl(const std::vector<TemplateRecord>& docs, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write corpus file '" + path + "'");
  for (const auto& doc : docs) out << template_to_json(doc) << '\n';
}

}  // namespace mms
