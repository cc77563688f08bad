#include "reviewforge/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "reviewforge/hash.hpp"
#include "reviewforge/io.hpp"

namespace reviewforge {

Vocabulary Vocabulary::build(const std::vector<ReviewPair>& train, std::uint64_t min_frequency) {
  if (train.empty()) throw std::invalid_argument("cannot build vocabulary from empty training set");
  // std::map keeps the tie-break ordering stable without a second sort key.
  std::map<std::string, std::uint64_t> freq;
  std::uint64_t sequences = 0;
  for (const auto& pair : train) {
    for (const auto& tok : pair.context.tokens()) ++freq[tok];
    for (const auto& tok : pair.review) ++freq[tok];
    ++sequences;
  }
  std::uint64_t unk_count = 0;
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  kept.reserve(freq.size());
  for (auto& [tok, count] : freq) {
    if (count >= min_frequency) {
      kept.emplace_back(tok, count);
    } else {
      unk_count += count;
    }
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(kept.size() + 2);
  entries.emplace_back(std::string(kUnkToken), unk_count);
  for (auto& e : kept) entries.push_back(std::move(e));
  entries.emplace_back(std::string(kEosToken), sequences);
  return from_entries(std::move(entries));
}

Vocabulary Vocabulary::from_entries(std::vector<std::pair<std::string, std::uint64_t>> entries) {
  if (entries.size() < 2 || entries.front().first != kUnkToken ||
      entries.back().first != kEosToken)
    throw std::invalid_argument("vocabulary entries must start with UNK and end with EOS");
  Vocabulary vocab;
  vocab.tokens_.reserve(entries.size());
  vocab.counts_.reserve(entries.size());
  for (auto& [tok, count] : entries) {
    vocab.tokens_.push_back(std::move(tok));
    vocab.counts_.push_back(count);
  }
  vocab.rebuild_index();
  return vocab;
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(tokens_.size()); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], i);
    if (!inserted) throw std::invalid_argument("duplicate vocabulary token: " + tokens_[i]);
  }
}

std::int32_t Vocabulary::id_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.find(std::string(token)) != index_.end();
}

std::vector<std::int32_t> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) ids.push_back(id_of(tok));
  return ids;
}

TokenSequence Vocabulary::decode(std::span<const std::int32_t> ids) const {
  TokenSequence tokens;
  tokens.reserve(ids.size());
  for (std::int32_t id : ids) tokens.push_back(token_of(id));
  return tokens;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& tok : tokens_) {
    h = fnv1a(tok, h);
    h = fnv1a(std::string_view("\n", 1), h);
  }
  return h;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::vector<std::string> lines;
  lines.reserve(tokens_.size());
  for (size_t i = 0; i < tokens_.size(); ++i)
    lines.push_back(tokens_[i] + "\t" + std::to_string(counts_[i]));
  write_lines(path, lines);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    size_t tab = lines[i].find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(i + 1) +
                               ": expected token<TAB>count");
    entries.emplace_back(lines[i].substr(0, tab),
                         std::stoull(lines[i].substr(tab + 1)));
  }
  return from_entries(std::move(entries));
}

}  // namespace reviewforge
