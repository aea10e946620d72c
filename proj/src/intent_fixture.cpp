#include "mms/intent_graph.hpp"

namespace mms {

namespace {

struct FixtureRow {
  const char* id;
  const char* label;
  const char* parent;
  const char* synonyms;  // pipe-separated, may be empty
};

// Desk-scale stand-in for the production graph: seven top-level concept
// families with one or two levels of subtypes.
constexpr FixtureRow kFixture[] = {
    {"events", "events", "", ""},
    {"events.birthday", "birthday", "events", "birthday party|bday"},
    {"events.wedding", "wedding", "events", ""},
    {"events.graduation", "graduation", "events", "grad"},
    {"events.anniversary", "anniversary", "events", ""},
    {"events.baby_shower", "baby shower", "events", ""},
    {"events.retirement", "retirement", "events", ""},
    {"events.seasonal", "seasonal", "events", ""},
    {"events.seasonal.halloween", "halloween", "events.seasonal", "spooky season"},
    {"events.seasonal.thanksgiving", "thanksgiving", "events.seasonal", ""},
    {"events.seasonal.july4", "4th of july", "events.seasonal", "fourth of july|july 4th"},
    {"events.seasonal.christmas", "christmas", "events.seasonal", "xmas"},
    {"events.seasonal.easter", "easter", "events.seasonal", ""},
    {"events.seasonal.new_year", "new year", "events.seasonal", "new years"},
    {"events.seasonal.valentines", "valentines day", "events.seasonal", "valentine s day|valentines"},
    {"events.seasonal.diwali", "diwali", "events.seasonal", ""},
    {"events.seasonal.hanukkah", "hanukkah", "events.seasonal", ""},

    {"actions", "actions", "", ""},
    {"actions.run", "run", "actions", "running"},
    {"actions.dance", "dance", "actions", "dancing"},
    {"actions.yoga", "yoga", "actions", ""},
    {"actions.cooking", "cooking", "actions", ""},
    {"actions.workout", "workout", "actions", "fitness"},
    {"actions.swim", "swim", "actions", "swimming"},
    {"actions.hiking", "hiking", "actions", ""},
    {"actions.sale", "sale", "actions", "discount"},
    {"actions.opening", "opening", "actions", "grand opening"},
    {"actions.party", "party", "actions", ""},
    {"actions.celebration", "celebration", "actions", ""},
    {"actions.travel", "travel", "actions", ""},
    {"actions.shopping", "shopping", "actions", ""},
    {"actions.baking", "baking", "actions", ""},
    {"actions.gardening", "gardening", "actions", ""},
    {"actions.meditation", "meditation", "actions", "mindfulness"},
    {"actions.astrology", "astrology", "actions", "horoscope"},
    {"actions.karaoke", "karaoke", "actions", ""},
    {"actions.origami", "origami", "actions", ""},
    {"actions.journaling", "journaling", "actions", ""},
    {"actions.pottery", "pottery", "actions", "ceramics"},
    {"actions.calligraphy", "calligraphy", "actions", "hand lettering"},

    {"objects", "objects", "", ""},
    {"objects.unicorn", "unicorn", "objects", ""},
    {"objects.coffee", "coffee", "objects", "espresso"},
    {"objects.cat", "cat", "objects", "kitten"},
    {"objects.dog", "dog", "objects", "puppy"},
    {"objects.beach", "beach", "objects", ""},
    {"objects.mountain", "mountain", "objects", ""},
    {"objects.flower", "flower", "objects", "floral"},
    {"objects.cake", "cake", "objects", ""},
    {"objects.balloon", "balloon", "objects", ""},
    {"objects.guitar", "guitar", "objects", ""},
    {"objects.pizza", "pizza", "objects", ""},
    {"objects.book", "book", "objects", ""},
    {"objects.car", "car", "objects", ""},
    {"objects.heart", "heart", "objects", ""},
    {"objects.star", "star", "objects", ""},
    {"objects.sun", "sun", "objects", ""},
    {"objects.moon", "moon", "objects", ""},
    {"objects.tree", "tree", "objects", ""},
    {"objects.gift", "gift", "objects", "present"},
    {"objects.camera", "camera", "objects", ""},
    {"objects.family", "family", "objects", ""},

    {"moods", "moods", "", ""},
    {"moods.happy", "happy", "moods", ""},
    {"moods.joyful", "joyful", "moods", ""},
    {"moods.elegant", "elegant", "moods", ""},
    {"moods.minimal", "minimal", "moods", "minimalist"},
    {"moods.bold", "bold", "moods", ""},
    {"moods.playful", "playful", "moods", ""},
    {"moods.vintage", "vintage", "moods", "retro"},
    {"moods.modern", "modern", "moods", ""},
    {"moods.cozy", "cozy", "moods", ""},
    {"moods.bright", "bright", "moods", ""},
    {"moods.calm", "calm", "moods", ""},
    {"moods.romantic", "romantic", "moods", ""},

    {"canvas", "canvas types", "", ""},
    {"canvas.poster", "poster", "canvas", ""},
    {"canvas.flyer", "flyer", "canvas", ""},
    {"canvas.card", "card", "canvas", "greeting card"},
    {"canvas.invitation", "invitation", "canvas", "invite"},
    {"canvas.banner", "banner", "canvas", ""},
    {"canvas.instagram_post", "instagram post", "canvas", "ig post"},
    {"canvas.instagram_story", "instagram story", "canvas", "ig story"},
    {"canvas.instagram_reel", "instagram reel", "canvas", "ig reel"},
    {"canvas.facebook_post", "facebook post", "canvas", ""},
    {"canvas.youtube_thumbnail", "youtube thumbnail", "canvas", ""},
    {"canvas.logo", "logo", "canvas", ""},
    {"canvas.menu", "menu", "canvas", ""},
    {"canvas.resume", "resume", "canvas", "cv"},
    {"canvas.newsletter", "newsletter", "canvas", ""},
    {"canvas.collage", "collage", "canvas", ""},
    {"canvas.presentation", "presentation", "canvas", "slides"},
    {"canvas.brochure", "brochure", "canvas", ""},
    {"canvas.business_card", "business card", "canvas", ""},
    {"canvas.wallpaper", "wallpaper", "canvas", ""},

    {"colors", "colors", "", ""},
    {"colors.pink", "pink", "colors", ""},
    {"colors.gold", "gold", "colors", "golden"},
    {"colors.blue", "blue", "colors", ""},
    {"colors.green", "green", "colors", ""},
    {"colors.black", "black", "colors", ""},
    {"colors.white", "white", "colors", ""},
    {"colors.pastel", "pastel", "colors", ""},
    {"colors.neon", "neon", "colors", ""},
    {"colors.red", "red", "colors", ""},
    {"colors.purple", "purple", "colors", ""},
    {"colors.orange", "orange", "colors", ""},
    {"colors.silver", "silver", "colors", ""},

    {"backgrounds", "backgrounds", "", ""},
    {"backgrounds.beach", "beach background", "backgrounds", ""},
    {"backgrounds.floral", "floral background", "backgrounds", ""},
    {"backgrounds.abstract", "abstract background", "backgrounds", ""},
    {"backgrounds.gradient", "gradient background", "backgrounds", ""},
    {"backgrounds.marble", "marble background", "backgrounds", ""},
    {"backgrounds.wood", "wood background", "backgrounds", ""},
    {"backgrounds.space", "space background", "backgrounds", ""},
    {"backgrounds.city", "city background", "backgrounds", ""},
};

}  // namespace

IntentGraph IntentGraph::builtin_fixture() {
  std::vector<IntentNode> nodes;
  nodes.reserve(std::size(kFixture));
  for (const auto& row : kFixture) {
    IntentNode node;
    node.id = row.id;
    node.label = row.label;
    node.parent_id = row.parent;
    std::string syns = row.synonyms;
    size_t start = 0;
    while (start < syns.size()) {
      size_t bar = syns.find('|', start);
      if (bar == std::string::npos) bar = syns.size();
      if (bar > start) node.synonyms.push_back(syns.substr(start, bar - start));
      start = bar + 1;
    }
    nodes.push_back(std::move(node));
  }
  return from_nodes(std::move(nodes));
}

}  // namespace mms
