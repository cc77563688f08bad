#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reviewforge/corpus.hpp"

namespace reviewforge {

// Token/index bijection with two reserved entries: UNK at index 0 collects
// rare tokens, EOS sits at the final index. Regular tokens are ordered by
// descending frequency (ties alphabetically), so indices are reproducible
// from the training corpus alone.
class Vocabulary {
 public:
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kEosToken = "</s>";
  static constexpr std::int32_t kUnkId = 0;

  Vocabulary() = default;

  // Counts context and review tokens of the training pairs (one shared
  // vocabulary for both sides).
  static Vocabulary build(const std::vector<ReviewPair>& train, std::uint64_t min_frequency = 10);

  // Entries in index order, UNK first, EOS last. Used by load() and tests.
  static Vocabulary from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries);

  // Number of maskable tokens: UNK plus regular entries, EOS excluded.
  std::int32_t size() const { return static_cast<std::int32_t>(tokens_.size()) - 1; }
  // Length of a score vector over the full alphabet (EOS included, last).
  std::int32_t scored_size() const { return static_cast<std::int32_t>(tokens_.size()); }
  std::int32_t eos_id() const { return size(); }

  std::int32_t id_of(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token_of(std::int32_t id) const { return tokens_.at(id); }
  std::uint64_t count_of(std::int32_t id) const { return counts_.at(id); }

  std::vector<std::int32_t> encode(std::span<const std::string> tokens) const;
  TokenSequence decode(std::span<const std::int32_t> ids) const;

  // FNV-1a over the token list in index order; stamps model files so a
  // mismatched vocabulary is rejected at load time.
  std::uint64_t hash() const;

  // "token<TAB>count" per line, in index order.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::int32_t> index_;

  void rebuild_index();
};

}  // namespace reviewforge
