#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "reviewforge/io.hpp"
#include "reviewforge/obfuscate.hpp"

using namespace reviewforge;
namespace fs = std::filesystem;

namespace {

Vocabulary dict_with(std::vector<std::string> words) {
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.emplace_back(std::string(Vocabulary::kUnkToken), 0);
  for (auto& w : words) entries.emplace_back(std::move(w), 1);
  entries.emplace_back(std::string(Vocabulary::kEosToken), 1);
  return Vocabulary::from_entries(std::move(entries));
}

}  // namespace

TEST_CASE("default spelling rules map common words") {
  SpellingRuleSet rules = SpellingRuleSet::defaults();
  CHECK(rules.size() >= 80);
  REQUIRE(rules.find("definitely") != nullptr);
  CHECK(*rules.find("definitely") == "definately");
  REQUIRE(rules.find("restaurant") != nullptr);
  CHECK(*rules.find("restaurant") == "restaraunt");
  CHECK(rules.find("food") == nullptr);
  CHECK(rules.find("") == nullptr);
}

TEST_CASE("add_rule validates forms and keeps the first duplicate") {
  SpellingRuleSet rules;
  CHECK_THROWS_AS(rules.add_rule("Weird", "wierd"), std::invalid_argument);
  CHECK_THROWS_AS(rules.add_rule("two words", "typo"), std::invalid_argument);
  CHECK_THROWS_AS(rules.add_rule("same", "same"), std::invalid_argument);
  rules.add_rule("weird", "wierd");
  rules.add_rule("weird", "weerd");
  CHECK(rules.size() == 1);
  CHECK(*rules.find("weird") == "wierd");
}

TEST_CASE("spelling rule files round-trip") {
  fs::path dir = fs::temp_directory_path() / "reviewforge_test_rules";
  fs::create_directories(dir);
  write_lines(dir / "rules.tsv",
              std::vector<std::string>{"# common slips", "", "weird\twierd", "piece\tpeice"});
  SpellingRuleSet loaded = SpellingRuleSet::load(dir / "rules.tsv");
  CHECK(loaded.size() == 2);
  CHECK(*loaded.find("piece") == "peice");

  loaded.save(dir / "out.tsv");
  SpellingRuleSet again = SpellingRuleSet::load(dir / "out.tsv");
  CHECK(again.size() == 2);
  CHECK(*again.find("weird") == "wierd");

  write_lines(dir / "bad.tsv", std::vector<std::string>{"no-tab-here"});
  CHECK_THROWS_AS(SpellingRuleSet::load(dir / "bad.tsv"), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("apply_spelling_rule preserves leading case") {
  SpellingRuleSet rules = SpellingRuleSet::defaults();
  CHECK(apply_spelling_rule("definitely", rules) == "definately");
  CHECK(apply_spelling_rule("Definitely", rules) == "Definately");
  CHECK(apply_spelling_rule("pasta", rules) == "pasta");
  CHECK(apply_spelling_rule("", rules) == "");
}

TEST_CASE("key adjacency follows the staggered QWERTY layout") {
  CHECK(keys_adjacent('q', 'w'));
  CHECK(keys_adjacent('g', 'h'));
  CHECK(keys_adjacent('q', 'a'));   // directly below
  CHECK(keys_adjacent('w', 'a'));   // below-left across the stagger
  CHECK(keys_adjacent('1', 'q'));
  CHECK(keys_adjacent('B', 'n'));   // case-insensitive
  CHECK_FALSE(keys_adjacent('q', 's'));
  CHECK_FALSE(keys_adjacent('q', 'z'));  // two rows apart
  CHECK_FALSE(keys_adjacent('q', 'p'));
  CHECK_FALSE(keys_adjacent('a', '?'));  // unknown key
  CHECK_FALSE(keys_adjacent('a', 'a'));
}

TEST_CASE("keyboard weights validate and price substitutions") {
  KeyboardWeights w = KeyboardWeights::defaults();
  CHECK_NOTHROW(w.validate());
  CHECK(w.substitution_cost('q', 'w') == w.substitution_adjacent);
  CHECK(w.substitution_cost('q', 'p') == w.substitution_other);

  KeyboardWeights bad = w;
  bad.insertion = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = w;
  bad.substitution_adjacent = bad.substitution_other;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("keyboard weight files round-trip with partial keys") {
  fs::path dir = fs::temp_directory_path() / "reviewforge_test_weights";
  fs::create_directories(dir);
  KeyboardWeights w = KeyboardWeights::defaults();
  w.transposition = 0.9;
  w.save(dir / "w.json");
  KeyboardWeights loaded = KeyboardWeights::load(dir / "w.json");
  CHECK(loaded.transposition == doctest::Approx(0.9));
  CHECK(loaded.insertion == doctest::Approx(w.insertion));

  write_file(dir / "partial.json", "{\"deletion\": 2.5}\n");
  KeyboardWeights partial = KeyboardWeights::load(dir / "partial.json");
  CHECK(partial.deletion == doctest::Approx(2.5));
  CHECK(partial.insertion == doctest::Approx(KeyboardWeights{}.insertion));
  fs::remove_all(dir);
}

TEST_CASE("typo candidates enumerate distinct single edits with edit costs") {
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary empty_dict;
  auto candidates = typo_candidates("ab", w, empty_dict);
  REQUIRE(!candidates.empty());

  auto find = [&](const std::string& word) -> const TypoCandidate* {
    for (const auto& c : candidates)
      if (c.word == word) return &c;
    return nullptr;
  };
  CHECK(find("ab") == nullptr);  // the input is never a candidate
  REQUIRE(find("ba") != nullptr);
  CHECK(find("ba")->cost == doctest::Approx(w.transposition));
  REQUIRE(find("an") != nullptr);  // b and n are neighbors
  CHECK(find("an")->cost == doctest::Approx(w.substitution_adjacent));
  REQUIRE(find("az") != nullptr);
  CHECK(find("az")->cost == doctest::Approx(w.substitution_other));
  REQUIRE(find("a") != nullptr);
  CHECK(find("a")->cost == doctest::Approx(w.deletion));
  REQUIRE(find("aab") != nullptr);
  CHECK(find("aab")->cost == doctest::Approx(w.insertion));

  CHECK(std::is_sorted(candidates.begin(), candidates.end(),
                       [](const auto& a, const auto& b) { return a.word < b.word; }));
  for (std::size_t i = 1; i < candidates.size(); ++i)
    CHECK(candidates[i].word != candidates[i - 1].word);
  for (const auto& c : candidates) {
    CHECK(c.weight == doctest::Approx(1.0 / c.cost));  // empty dictionary: no boost
    CHECK(c.word != "ab");
  }
}

TEST_CASE("dictionary words get the real-word boost") {
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict = dict_with({"ba"});
  auto candidates = typo_candidates("ab", w, dict);
  for (const auto& c : candidates) {
    double base = 1.0 / c.cost;
    if (c.word == "ba") {
      CHECK(c.weight == doctest::Approx(base * w.real_word_boost));
    } else {
      CHECK(c.weight == doctest::Approx(base));
    }
  }
}

TEST_CASE("inject_typo always changes words of two or more characters") {
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict;
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    std::string out = inject_typo("pasta", w, dict, rng);
    CHECK(out != "pasta");
    CHECK(!out.empty());
  }
  CHECK(inject_typo("a", w, dict, rng) == "a");
  CHECK(inject_typo("", w, dict, rng) == "");

  Rng a(7), b(7);
  CHECK(inject_typo("pasta", w, dict, a) == inject_typo("pasta", w, dict, b));
}

TEST_CASE("obfuscate at zero probabilities is the identity") {
  SpellingRuleSet rules = SpellingRuleSet::defaults();
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict;
  Rng rng(5);
  TokenSequence review = {"the", "food", "was", "definitely", "great", "!"};
  CHECK(obfuscate(review, 0.0, 0.0, rules, w, dict, rng) == review);
}

TEST_CASE("obfuscate validates probabilities") {
  SpellingRuleSet rules;
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict;
  Rng rng(5);
  CHECK_THROWS_AS(obfuscate({"x"}, -0.1, 0.0, rules, w, dict, rng), std::invalid_argument);
  CHECK_THROWS_AS(obfuscate({"x"}, 0.0, 1.5, rules, w, dict, rng), std::invalid_argument);
}

TEST_CASE("spelling rules fire before typos and only on matching words") {
  SpellingRuleSet rules = SpellingRuleSet::defaults();
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict;
  Rng rng(5);
  TokenSequence review = {"definitely", "definitely", "tasty"};
  TokenSequence out = obfuscate(review, 0.0, 1.0, rules, w, dict, rng);
  CHECK(out[0] == "definately");
  CHECK(out[1] == "definately");
  CHECK(out[2] == "tasty");  // no rule, p_typo = 0
}

TEST_CASE("typos hit every eligible token at p_typo=1 and spare punctuation") {
  SpellingRuleSet rules;  // empty: no spelling rewrites
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict;
  Rng rng(11);
  TokenSequence review = {"the", "soup", "!", "a", "5", "yum", ","};
  TokenSequence out = obfuscate(review, 1.0, 0.0, rules, w, dict, rng);
  REQUIRE(out.size() == review.size());  // token count is invariant
  CHECK(out[0] != "the");
  CHECK(out[1] != "soup");
  CHECK(out[2] == "!");
  CHECK(out[3] == "a");  // single characters stay
  CHECK(out[4] == "5");  // one-char number token
  CHECK(out[5] != "yum");
  CHECK(out[6] == ",");
}

TEST_CASE("perturbed token fraction tracks p_typo") {
  SpellingRuleSet rules;
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict;
  Rng rng(23);
  const int n = 4000;
  TokenSequence review(n, "pasta");
  TokenSequence out = obfuscate(review, 0.25, 0.0, rules, w, dict, rng);
  int changed = 0;
  for (int i = 0; i < n; ++i) changed += out[static_cast<std::size_t>(i)] != "pasta";
  double sigma = std::sqrt(n * 0.25 * 0.75);
  CHECK(std::abs(changed - 0.25 * n) <= 4.0 * sigma);
}

TEST_CASE("obfuscate_batch is independent of the job count") {
  SpellingRuleSet rules = SpellingRuleSet::defaults();
  KeyboardWeights w = KeyboardWeights::defaults();
  Vocabulary dict = dict_with({"pasta", "pizza", "salad"});
  std::vector<TokenSequence> reviews = {
      {"the", "pasta", "was", "great"},
      {"definitely", "tasty", "pizza"},
      {"salad", "came", "cold", "."},
      {"service", "was", "slow"},
  };
  auto serial = obfuscate_batch(reviews, 0.5, 0.5, rules, w, dict, 99, 1);
  auto threaded = obfuscate_batch(reviews, 0.5, 0.5, rules, w, dict, 99, 4);
  REQUIRE(serial.size() == reviews.size());
  CHECK(serial == threaded);

  // Element i uses the stream derived from (seed, i).
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    Rng rng = derive_rng(99, i);
    CHECK(serial[i] == obfuscate(reviews[i], 0.5, 0.5, rules, w, dict, rng));
  }
}
