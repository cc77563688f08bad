#include "reviewforge/sample_corpus.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reviewforge/io.hpp"
#include "reviewforge/rng.hpp"

namespace reviewforge {

namespace {

struct Cuisine {
  const char* tag;
  std::array<const char*, 10> dishes;
  std::array<const char*, 4> stems;
};

const Cuisine kCuisines[] = {
    {"Italian",
     {"margherita pizza", "lasagna", "spaghetti carbonara", "mushroom risotto", "gnocchi",
      "tiramisu", "bruschetta", "penne arrabbiata", "ravioli", "panna cotta"},
     {"Bella Notte", "Trattoria Roma", "Nonna's Table", "Piccola Cucina"}},
    {"Mexican",
     {"carne asada tacos", "chicken enchiladas", "carnitas burrito", "guacamole",
      "queso fundido", "fish tacos", "tamales", "churros", "pozole", "street corn"},
     {"Casa Verde", "El Camino", "La Fiesta", "Dos Hermanos"}},
    {"Chinese",
     {"kung pao chicken", "pork fried rice", "steamed dumplings", "orange chicken", "chow mein",
      "hot and sour soup", "spring rolls", "mapo tofu", "peking duck", "sesame noodles"},
     {"Golden Dragon", "Jade Palace", "Lucky Bamboo", "Red Lantern"}},
    {"Japanese",
     {"salmon sashimi", "spicy tuna roll", "chicken teriyaki", "miso ramen", "shrimp tempura",
      "tonkatsu", "edamame", "unagi don", "gyoza", "seaweed salad"},
     {"Sakura", "Tokyo Table", "Umami Den", "Koi Garden"}},
    {"American",
     {"bacon cheeseburger", "buffalo wings", "pulled pork sandwich", "mac and cheese",
      "cobb salad", "ribeye steak", "onion rings", "apple pie", "clam chowder", "meatloaf"},
     {"Liberty", "Main Street", "The Brass Tap", "Hometown"}},
    {"Indian",
     {"chicken tikka masala", "lamb vindaloo", "garlic naan", "vegetable samosas",
      "palak paneer", "chicken biryani", "butter chicken", "mango lassi", "dal makhani",
      "tandoori chicken"},
     {"Taj Spice", "Bombay Garden", "Curry Leaf", "Saffron"}},
    {"Thai",
     {"pad thai", "green curry", "tom yum soup", "mango sticky rice", "drunken noodles",
      "papaya salad", "massaman curry", "crispy spring rolls", "basil fried rice",
      "chicken satay"},
     {"Thai Orchid", "Bangkok Bites", "Lemongrass", "Siam House"}},
    {"French",
     {"french onion soup", "duck confit", "croque monsieur", "beef bourguignon", "creme brulee",
      "quiche lorraine", "ratatouille", "steak frites", "nicoise salad", "macarons"},
     {"Le Petit", "Chez Colette", "Bistro Lumiere", "Maison Bleue"}},
    {"Greek",
     {"gyro platter", "moussaka", "spanakopita", "greek salad", "chicken souvlaki", "baklava",
      "hummus plate", "dolmades", "lamb kebabs", "grilled octopus"},
     {"Athena", "Olive and Vine", "Santorini Blue", "Mykonos"}},
    {"Barbeque",
     {"brisket plate", "pulled pork", "smoked ribs", "burnt ends", "cornbread", "coleslaw",
      "sausage links", "baked beans", "smoked turkey", "banana pudding"},
     {"Smokestack", "Pit Row", "Hickory Bros", "Blue Flame"}},
    {"Seafood",
     {"lobster roll", "grilled salmon", "shrimp scampi", "fish and chips", "crab cakes",
      "fresh oysters", "clam linguine", "seared scallops", "fried calamari", "cioppino"},
     {"The Wharf", "Salt and Tide", "Harbor Catch", "Pearl Diver"}},
    {"Vegetarian",
     {"veggie burger", "quinoa bowl", "falafel wrap", "avocado toast", "lentil soup",
      "stuffed peppers", "kale salad", "cauliflower tacos", "tofu stir fry",
      "sweet potato fries"},
     {"Green Fork", "Rooted", "The Sprout", "Harvest Moon"}},
};

const std::pair<const char*, const char*> kCities[] = {
    {"Las Vegas", "NV"}, {"Phoenix", "AZ"},    {"Scottsdale", "AZ"}, {"Charlotte", "NC"},
    {"Pittsburgh", "PA"}, {"Madison", "WI"},   {"Cleveland", "OH"},  {"Tempe", "AZ"},
    {"Henderson", "NV"}, {"Mesa", "AZ"},
};

const char* const kSuffixes[] = {"", " Kitchen", " Grill", " House", " Cafe", " Bistro",
                                 " Eatery", " Bar and Grill"};

const char* const kPositiveAdj[] = {"amazing",  "fantastic", "delicious", "excellent",
                                    "wonderful", "great",    "incredible", "tasty",
                                    "flavorful", "perfect",  "outstanding", "superb"};
const char* const kNeutralAdj[] = {"okay", "decent", "average", "fine", "reasonable",
                                   "unremarkable"};
const char* const kNegativeAdj[] = {"bland",    "cold",     "soggy",        "awful",
                                    "terrible", "dry",      "disappointing", "greasy",
                                    "stale",    "mediocre", "overcooked",   "salty"};

const char* const kMeals[] = {"lunch", "dinner", "brunch", "a quick bite", "a late dinner",
                              "an early lunch"};
const char* const kCompanions[] = {"my wife",    "my husband", "a few friends", "coworkers",
                                   "the family", "a friend",   "my parents"};
const char* const kTimePhrases[] = {"last week",      "last night",     "yesterday",
                                    "over the weekend", "a few days ago", "on a whim"};
const char* const kDays[] = {"monday", "tuesday", "wednesday", "thursday",
                             "friday", "saturday", "sunday"};
const char* const kAspects[] = {"atmosphere", "decor", "patio", "seating", "dining room",
                                "music"};
const char* const kAspectAdjPos[] = {"cozy", "warm", "charming", "lively", "relaxed",
                                     "inviting"};
const char* const kAspectAdjNeg[] = {"loud", "cramped", "dated", "dim", "chaotic", "sticky"};
const char* const kServicePos[] = {"friendly", "attentive", "helpful", "welcoming", "quick",
                                   "on top of everything"};
const char* const kServiceNeg[] = {"slow", "rude", "forgetful", "inattentive", "dismissive",
                                   "nowhere to be found"};
const char* const kSizePos[] = {"generous", "huge", "hearty", "fair"};
const char* const kSizeNeg[] = {"small", "tiny", "skimpy"};
const char* const kPricePos[] = {"reasonable", "fair", "a bargain", "easy on the wallet"};
const char* const kPriceNeg[] = {"steep", "high", "hard to justify"};
const char* const kWaits[] = {"twenty minutes", "half an hour", "almost an hour",
                              "forty five minutes"};

template <typename T, std::size_t N>
const T& pick(Rng& rng, const T (&items)[N]) {
  return items[rng.next_below(N)];
}

template <std::size_t N>
const char* pick(Rng& rng, const std::array<const char*, N>& items) {
  return items[rng.next_below(N)];
}

struct Business {
  std::string name;
  std::string city;
  std::string state;
  const Cuisine* cuisine;
};

std::vector<Business> make_roster(Rng& rng) {
  std::vector<Business> roster;
  std::size_t city_index = 0;
  for (const Cuisine& cuisine : kCuisines) {
    for (const char* stem : cuisine.stems) {
      for (int copy = 0; copy < 2; ++copy) {
        Business b;
        b.name = std::string(stem) + pick(rng, kSuffixes);
        const auto& city = kCities[city_index++ % std::size(kCities)];
        b.city = city.first;
        b.state = city.second;
        b.cuisine = &cuisine;
        roster.push_back(std::move(b));
      }
    }
  }
  return roster;
}

enum class Band { kNeg, kNeu, kPos };

Band band_for(int rating) {
  if (rating >= 4) return Band::kPos;
  if (rating == 3) return Band::kNeu;
  return Band::kNeg;
}

const char* overall_adj(Band band, Rng& rng) {
  switch (band) {
    case Band::kPos:
      return pick(rng, kPositiveAdj);
    case Band::kNeu:
      return pick(rng, kNeutralAdj);
    default:
      return pick(rng, kNegativeAdj);
  }
}

std::string opener(const Business& b, Band band, Rng& rng) {
  const double r = rng.next_double();
  if (r < 0.30) return std::string("The food was ") + overall_adj(band, rng) + ".";
  if (r < 0.45)
    return std::string("I came here for ") + pick(rng, kMeals) + " with " +
           pick(rng, kCompanions) + ".";
  if (r < 0.57)
    return std::string("Stopped in for ") + pick(rng, kMeals) + " " + pick(rng, kTimePhrases) +
           ".";
  if (r < 0.67) return std::string("This place is ") + overall_adj(band, rng) + ".";
  if (r < 0.75)
    return std::string("We tried this spot for the first time ") + pick(rng, kTimePhrases) + ".";
  if (r < 0.83)
    return std::string("My ") + (rng.next_bernoulli(0.5) ? "wife" : "husband") +
           " and I had " + pick(rng, kMeals) + " here " + pick(rng, kTimePhrases) + ".";
  if (r < 0.90)
    return std::string("Came here ") + pick(rng, kTimePhrases) + " and it was " +
           overall_adj(band, rng) + ".";
  return std::string("A ") + overall_adj(band, rng) + " little spot in " + b.city + ".";
}

std::string middle(const Business& b, Band band, Rng& rng) {
  const Cuisine& cuisine = *b.cuisine;
  const bool positive = band == Band::kPos || (band == Band::kNeu && rng.next_bernoulli(0.5));
  const char* adj = positive ? pick(rng, kPositiveAdj)
                             : (band == Band::kNeu ? pick(rng, kNeutralAdj)
                                                   : pick(rng, kNegativeAdj));
  const int choice = static_cast<int>(rng.next_below(10));
  switch (choice) {
    case 0:
      return std::string("The ") + pick(rng, cuisine.dishes) + " was " + adj + ".";
    case 1:
      return std::string("I ordered the ") + pick(rng, cuisine.dishes) + " and it was " + adj +
             ".";
    case 2: {
      const char* d1 = pick(rng, cuisine.dishes);
      const char* d2 = pick(rng, cuisine.dishes);
      return std::string("The ") + d1 + " and the " + d2 + " were both " + adj + ".";
    }
    case 3:
      return std::string("Our server was ") +
             (positive ? pick(rng, kServicePos) : pick(rng, kServiceNeg)) +
             " and the food came out " + (positive ? "quickly" : "slowly") + ".";
    case 4:
      return std::string("Service was ") +
             (positive ? pick(rng, kServicePos) : pick(rng, kServiceNeg)) + ".";
    case 5:
      return std::string("Portions are ") +
             (positive ? pick(rng, kSizePos) : pick(rng, kSizeNeg)) + " and the prices are " +
             (positive ? pick(rng, kPricePos) : pick(rng, kPriceNeg)) + ".";
    case 6:
      return std::string("The ") + pick(rng, kAspects) + " was " +
             (positive ? pick(rng, kAspectAdjPos) : pick(rng, kAspectAdjNeg)) + ".";
    case 7:
      return positive ? std::string("Do not skip the ") + pick(rng, cuisine.dishes) + "."
                      : std::string("We waited ") + pick(rng, kWaits) + " for a table.";
    case 8:
      return positive
                 ? std::string("You can tell the ingredients are fresh.")
                 : std::string("I have had better ") + b.cuisine->tag + " food elsewhere.";
    default:
      return std::string("Everything tasted ") + adj + ".";
  }
}

std::string closer(const Business& b, Band band, Rng& rng) {
  const int choice = static_cast<int>(rng.next_below(4));
  if (band == Band::kPos) {
    switch (choice) {
      case 0:
        return "Will definitely be back!";
      case 1:
        return "Highly recommend this place.";
      case 2:
        return std::string("Worth a visit if you are in ") + b.city + ".";
      default:
        return std::string("Solid choice for ") + pick(rng, kMeals) + " around here.";
    }
  }
  if (band == Band::kNeu) {
    switch (choice) {
      case 0:
        return "Might give it another try sometime.";
      case 1:
        return "Overall an average experience.";
      case 2:
        return "Not bad, not great.";
      default:
        return "Fine in a pinch.";
    }
  }
  switch (choice) {
    case 0:
      return "Probably will not be back.";
    case 1:
      return "I would not recommend it.";
    case 2:
      return "Save your money and go elsewhere.";
    default:
      return "Really disappointing visit.";
  }
}

int draw_rating(Rng& rng) {
  const double r = rng.next_double();
  if (r < 0.12) return 1;
  if (r < 0.24) return 2;
  if (r < 0.40) return 3;
  if (r < 0.70) return 4;
  return 5;
}

}  // namespace

std::vector<RawRecord> make_sample_records(const SampleCorpusOptions& options) {
  Rng rng(mix64(options.seed));
  std::vector<Business> roster = make_roster(rng);
  std::vector<RawRecord> records;
  records.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    const Business& b = roster[rng.next_below(roster.size())];
    RawRecord rec;
    rec.rating = draw_rating(rng);
    rec.business_name = b.name;
    rec.city = b.city;
    rec.state = b.state;
    rec.tags = {b.cuisine->tag, "Restaurants"};
    const Band band = band_for(rec.rating);
    const int middles = 1 + static_cast<int>(rng.next_below(3));  // 1..3
    std::string text = opener(b, band, rng);
    for (int m = 0; m < middles; ++m) text += " " + middle(b, band, rng);
    text += " " + closer(b, band, rng);
    rec.review_text = std::move(text);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_sample_jsonl(const std::filesystem::path& path, const SampleCorpusOptions& options) {
  auto records = make_sample_records(options);
  std::vector<std::string> lines;
  lines.reserve(records.size());
  for (const auto& rec : records) {
    nlohmann::json obj{{"text", rec.review_text}, {"stars", rec.rating},
                       {"name", rec.business_name}, {"city", rec.city},
                       {"state", rec.state},        {"categories", rec.tags}};
    lines.push_back(obj.dump());
  }
  write_lines(path, lines);
}

}  // namespace reviewforge
