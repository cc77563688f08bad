#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "reviewforge/readability.hpp"

using namespace reviewforge;

TEST_CASE("syllable counts follow the vowel-group heuristic") {
  CHECK(count_syllables("the") == 1);
  CHECK(count_syllables("good") == 1);
  CHECK(count_syllables("pizza") == 2);
  CHECK(count_syllables("delicious") == 3);
  CHECK(count_syllables("cake") == 1);   // trailing silent e
  CHECK(count_syllables("late") == 1);
  CHECK(count_syllables("table") == 2);  // -le keeps its beat
  CHECK(count_syllables("see") == 1);
  CHECK(count_syllables("fly") == 1);    // y as the only vowel
  CHECK(count_syllables("rhythm") == 1);
  CHECK(count_syllables("syzygy") == 3);
  CHECK(count_syllables("12") == 1);     // non-alphabetic reads as one beat
  CHECK(count_syllables("") == 1);
}

TEST_CASE("text_stats counts words, characters, and syllables") {
  TokenSequence review = {"the", "staff", "was", "very", "friendly", "."};
  TextStats s = text_stats(review);
  CHECK(s.words == 5);
  CHECK(s.chars == 23);
  CHECK(s.sentences == 1);
  CHECK(s.syllables == 7);
  CHECK(s.complex_words == 0);
  CHECK(s.long_words == 1);  // friendly, 8 characters
  CHECK(s.distinct_words == 5);
}

TEST_CASE("sentence counting handles runs, leading punctuation, and tails") {
  CHECK(text_stats({"!", "!", "hello", "."}).sentences == 1);
  CHECK(text_stats({"hello", ".", ".", "!", "world"}).sentences == 2);
  CHECK(text_stats({"hello", "world"}).sentences == 1);
  CHECK(text_stats({"great", "food", "!", "service", "was", "bad", ".", "would", "return"})
            .sentences == 3);
  CHECK(text_stats({","}).sentences == 1);  // floor keeps ratios finite
  CHECK(text_stats({}).sentences == 1);
}

TEST_CASE("numeric tokens count as words with their digit characters") {
  TextStats s = text_stats({"i", "ate", "12", "donuts", "."});
  CHECK(s.words == 4);
  CHECK(s.chars == 1 + 3 + 2 + 6);
  CHECK(s.syllables == 1 + 1 + 1 + 2);
}

TEST_CASE("readability formulas match hand-computed values") {
  TokenSequence review = {"the", "staff", "was", "very", "friendly", "."};
  auto scores = readability_scores(review);
  // words=5 chars=23 sentences=1 syllables=7 complex=0 long=1 distinct=5
  CHECK(scores[kAri] == doctest::Approx(4.71 * (23.0 / 5.0) + 0.5 * 5.0 - 21.43).epsilon(1e-12));
  CHECK(scores[kAri] == doctest::Approx(2.736).epsilon(1e-9));
  CHECK(scores[kFleschReadingEase] ==
        doctest::Approx(206.835 - 1.015 * 5.0 - 84.6 * (7.0 / 5.0)).epsilon(1e-12));
  CHECK(scores[kFleschKincaidGrade] ==
        doctest::Approx(0.39 * 5.0 + 11.8 * (7.0 / 5.0) - 15.59).epsilon(1e-12));
  CHECK(scores[kGunningFog] == doctest::Approx(0.4 * 5.0).epsilon(1e-12));
  CHECK(scores[kSmog] == doctest::Approx(3.1291).epsilon(1e-12));
  CHECK(scores[kColemanLiau] ==
        doctest::Approx(0.0588 * 460.0 - 0.296 * 20.0 - 15.8).epsilon(1e-12));
  CHECK(scores[kLix] == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(scores[kRix] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scores[kDaleChall] == doctest::Approx(0.0496 * 5.0).epsilon(1e-12));
  CHECK(scores[kAvgSentenceLength] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(scores[kAvgWordLength] == doctest::Approx(4.6).epsilon(1e-12));
  CHECK(scores[kAvgSyllablesPerWord] == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(scores[kTypeTokenRatio] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("duplicating a terminated review leaves ratio metrics unchanged") {
  TokenSequence once = {"the", "staff", "was", "very", "friendly", "."};
  TokenSequence twice = once;
  twice.insert(twice.end(), once.begin(), once.end());
  auto a = readability_scores(once);
  auto b = readability_scores(twice);
  for (std::size_t i = 0; i < kReadabilityCount; ++i) {
    if (i == kTypeTokenRatio) {
      CHECK(b[i] == doctest::Approx(a[i] / 2.0).epsilon(1e-12));
    } else {
      CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("reviews without word tokens are rejected") {
  CHECK_THROWS_AS(readability_scores({"!", ",", "."}), std::invalid_argument);
  CHECK_THROWS_AS(readability_scores({}), std::invalid_argument);
}

TEST_CASE("index names are distinct and stable") {
  CHECK(readability_name(kAri) == "automated_readability_index");
  CHECK(readability_name(kTypeTokenRatio) == "type_token_ratio");
  for (std::size_t i = 0; i < kReadabilityCount; ++i) {
    for (std::size_t j = i + 1; j < kReadabilityCount; ++j) {
      CHECK(readability_name(i) != readability_name(j));
    }
  }
}
