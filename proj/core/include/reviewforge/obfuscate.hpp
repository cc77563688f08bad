#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reviewforge/rng.hpp"
#include "reviewforge/text.hpp"
#include "reviewforge/vocabulary.hpp"

namespace reviewforge {

// Ordered list of (correct form, misspelled form) word pairs. Lookup is by
// lowercase correct form; first rule wins when duplicates slip in.
class SpellingRuleSet {
 public:
  SpellingRuleSet() = default;

  // Built-in list of ~80 common English misspellings.
  static SpellingRuleSet defaults();

  // "correct<TAB>misspelled" per line; '#' comments and blanks skipped.
  static SpellingRuleSet load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Both forms must be single lowercase tokens and must differ.
  void add_rule(std::string correct, std::string misspelled);

  // Misspelled form for a lowercase word, or nullptr when no rule matches.
  const std::string* find(std::string_view word) const;

  std::size_t size() const { return rules_.size(); }
  const std::vector<std::pair<std::string, std::string>>& rules() const { return rules_; }

 private:
  std::vector<std::pair<std::string, std::string>> rules_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Edit costs for typo generation. Substitutions between physically adjacent
// QWERTY keys are the cheapest; every cost must stay positive and adjacent
// substitutions must stay cheaper than distant ones.
struct KeyboardWeights {
  double substitution_adjacent = 1.0;
  double substitution_other = 2.0;
  double insertion = 1.5;
  double deletion = 1.5;
  double transposition = 1.2;
  // Multiplies the sampling weight of candidates that are dictionary words.
  double real_word_boost = 8.0;

  static KeyboardWeights defaults() { return {}; }
  // JSON object mapping the field names above to numbers; absent keys keep
  // their defaults.
  static KeyboardWeights load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  void validate() const;
  double substitution_cost(char a, char b) const;
};

// True when the two characters sit on neighboring QWERTY keys (letter and
// digit rows).
bool keys_adjacent(char a, char b);

struct TypoCandidate {
  std::string word;
  double cost = 0.0;    // weighted edit cost of the single edit
  double weight = 0.0;  // sampling weight: (1/cost) * boost-if-real-word
};

// Every distinct single-edit perturbation of `word` (lowercase letter
// substitutions/insertions, deletions, adjacent transpositions), sorted so
// sampling is reproducible. The input itself is never a candidate.
std::vector<TypoCandidate> typo_candidates(const std::string& word,
                                           const KeyboardWeights& weights,
                                           const Vocabulary& dictionary);

// If a rule matches (case-insensitively on the first letter), returns the
// misspelled form with the first letter's case preserved; otherwise returns
// the word unchanged.
std::string apply_spelling_rule(const std::string& word, const SpellingRuleSet& rules);

// Samples one candidate with probability proportional to its weight. Words
// shorter than 2 characters come back unchanged; everything else is
// guaranteed to change.
std::string inject_typo(const std::string& word, const KeyboardWeights& weights,
                        const Vocabulary& dictionary, Rng& rng);

// Per word token: a matching spelling rule fires with probability p_spell;
// otherwise a typo is injected with probability p_typo. Punctuation tokens
// pass through and the token count never changes.
TokenSequence obfuscate(const TokenSequence& review, double p_typo, double p_spell,
                        const SpellingRuleSet& rules, const KeyboardWeights& weights,
                        const Vocabulary& dictionary, Rng& rng);

// One derived rng stream per review, so results are independent of job count.
std::vector<TokenSequence> obfuscate_batch(const std::vector<TokenSequence>& reviews,
                                           double p_typo, double p_spell,
                                           const SpellingRuleSet& rules,
                                           const KeyboardWeights& weights,
                                           const Vocabulary& dictionary, std::uint64_t seed,
                                           unsigned jobs = 1);

}  // namespace reviewforge
