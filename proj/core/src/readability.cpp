#include "reviewforge/readability.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace reviewforge {

namespace {

bool is_vowel(char c) {
  switch (c) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
    case 'y':
      return true;
    default:
      return false;
  }
}

bool is_sentence_end(const std::string& token) {
  return token == "." || token == "!" || token == "?";
}

}  // namespace

std::size_t count_syllables(std::string_view word) {
  std::string lower;
  lower.reserve(word.size());
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower.empty()) return 1;  // numbers and symbols read as one beat
  std::size_t groups = 0;
  bool in_group = false;
  for (char c : lower) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  // Trailing silent e: "cake" has one spoken syllable, "table" keeps two.
  if (lower.size() >= 3 && lower.back() == 'e' && !is_vowel(lower[lower.size() - 2]) &&
      lower[lower.size() - 2] != 'l' && groups > 1) {
    --groups;
  }
  return groups == 0 ? 1 : groups;
}

TextStats text_stats(const TokenSequence& review) {
  TextStats stats;
  std::unordered_set<std::string> seen;
  bool in_sentence_break = true;  // leading punctuation opens no sentence
  std::size_t breaks = 0;
  bool any_content = false;
  for (const auto& token : review) {
    if (is_sentence_end(token)) {
      if (!in_sentence_break) {
        ++breaks;
        in_sentence_break = true;
      }
      continue;
    }
    in_sentence_break = false;
    if (!is_word_token(token)) continue;
    any_content = true;
    ++stats.words;
    std::size_t chars = 0;
    for (char c : token)
      if (std::isalnum(static_cast<unsigned char>(c))) ++chars;
    stats.chars += chars;
    std::size_t syl = count_syllables(token);
    stats.syllables += syl;
    if (syl >= 3) ++stats.complex_words;
    if (chars > 6) ++stats.long_words;
    seen.insert(token);
  }
  stats.distinct_words = seen.size();
  // A trailing unterminated clause still counts as a sentence.
  stats.sentences = breaks + (in_sentence_break ? 0 : 1);
  if (stats.sentences == 0 && any_content) stats.sentences = 1;
  if (stats.sentences == 0) stats.sentences = 1;
  return stats;
}

std::string_view readability_name(std::size_t index) {
  static constexpr std::string_view names[kReadabilityCount] = {
      "automated_readability_index",
      "flesch_reading_ease",
      "flesch_kincaid_grade",
      "gunning_fog",
      "smog",
      "coleman_liau",
      "lix",
      "rix",
      "dale_chall_approx",
      "avg_sentence_length",
      "avg_word_length",
      "avg_syllables_per_word",
      "type_token_ratio",
  };
  return names[index];
}

std::array<double, kReadabilityCount> readability_scores(const TokenSequence& review) {
  TextStats s = text_stats(review);
  if (s.words == 0) throw std::invalid_argument("readability needs at least one word token");
  const double words = static_cast<double>(s.words);
  const double chars = static_cast<double>(s.chars);
  const double sentences = static_cast<double>(s.sentences);
  const double syllables = static_cast<double>(s.syllables);
  const double complex_words = static_cast<double>(s.complex_words);
  const double long_words = static_cast<double>(s.long_words);

  std::array<double, kReadabilityCount> out{};
  out[kAri] = 4.71 * (chars / words) + 0.5 * (words / sentences) - 21.43;
  out[kFleschReadingEase] =
      206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
  out[kFleschKincaidGrade] = 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59;
  out[kGunningFog] = 0.4 * ((words / sentences) + 100.0 * (complex_words / words));
  out[kSmog] = 1.0430 * std::sqrt(complex_words * 30.0 / sentences) + 3.1291;
  out[kColemanLiau] =
      0.0588 * (100.0 * chars / words) - 0.296 * (100.0 * sentences / words) - 15.8;
  out[kLix] = words / sentences + 100.0 * long_words / words;
  out[kRix] = long_words / sentences;
  out[kDaleChall] = 0.1579 * (100.0 * complex_words / words) + 0.0496 * (words / sentences);
  out[kAvgSentenceLength] = words / sentences;
  out[kAvgWordLength] = chars / words;
  out[kAvgSyllablesPerWord] = syllables / words;
  out[kTypeTokenRatio] = static_cast<double>(s.distinct_words) / words;
  return out;
}

}  // namespace reviewforge
