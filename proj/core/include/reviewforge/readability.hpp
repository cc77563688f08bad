#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "reviewforge/text.hpp"

namespace reviewforge {

// Surface statistics the readability formulas are built from. Words are the
// alphanumeric-initial tokens, characters count only their alphanumeric
// characters, and sentences are maximal runs of {. ! ?} tokens (minimum 1 so
// ratios stay finite).
struct TextStats {
  std::size_t words = 0;
  std::size_t chars = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
  std::size_t complex_words = 0;  // 3+ syllables
  std::size_t long_words = 0;     // more than 6 characters
  std::size_t distinct_words = 0;
};

TextStats text_stats(const TokenSequence& review);

// Vowel-group heuristic with a silent-e correction; at least 1.
std::size_t count_syllables(std::string_view word);

inline constexpr std::size_t kReadabilityCount = 13;

// Index layout of the readability block, fixed across the code base.
enum ReadabilityIndex : std::size_t {
  kAri = 0,
  kFleschReadingEase,
  kFleschKincaidGrade,
  kGunningFog,
  kSmog,
  kColemanLiau,
  kLix,
  kRix,
  kDaleChall,  // approximate: difficult words = 3+ syllables, no word list
  kAvgSentenceLength,
  kAvgWordLength,
  kAvgSyllablesPerWord,
  kTypeTokenRatio,
};

std::string_view readability_name(std::size_t index);

// The 13 metrics in ReadabilityIndex order. Throws std::invalid_argument on
// a review with no word tokens.
std::array<double, kReadabilityCount> readability_scores(const TokenSequence& review);

}  // namespace reviewforge
