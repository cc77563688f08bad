#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <vector>

#include "reviewforge/lm.hpp"

namespace reviewforge {

// Backoff n-gram model with absolute discounting, trained on context-prefixed
// review sequences so the business metadata conditions the distribution.
//
// For a history h of length k with observed total T and U distinct
// continuations, p_k(t|h) = max(c(h,t) - D, 0)/T + gamma * p_{k-1}(t|h'),
// gamma = D*U/T; unseen histories pass through to the shorter level. The
// recursion bottoms out at the uniform distribution over V plus EOS, which
// keeps every probability strictly positive and the vector exactly
// normalized.
struct NgramConfig {
  int order = 4;           // 2..NgramLM::kMaxOrder
  double discount = 0.75;  // in (0,1)
};

class NgramLM final : public LanguageModel {
 public:
  using Config = NgramConfig;
  static constexpr int kMaxOrder = 8;

  // Counts every position that predicts a review token or the terminal EOS;
  // histories may reach back into the context prefix.
  static NgramLM train(const std::vector<ReviewPair>& train_pairs, Vocabulary vocab,
                       Config config = {});

  const Vocabulary& vocabulary() const override { return vocab_; }
  const Config& config() const { return config_; }

  LogProbVector next_token_logprobs(std::span<const std::int32_t> context,
                                    std::span<const std::int32_t> prefix) const override;

  double sequence_logprob(std::span<const std::int32_t> context,
                          std::span<const std::int32_t> review) const override;

  // p(token | last up-to-(order-1) ids of history), probability not log.
  double token_prob(std::span<const std::int32_t> history, std::int32_t token) const;

  // Versioned binary file with the vocabulary embedded; counts are written
  // in canonical order so retraining on identical input reproduces the file
  // byte for byte.
  void save(const std::filesystem::path& path) const;
  static NgramLM load(const std::filesystem::path& path);

 private:
  NgramLM() = default;  // only train() and load() produce usable instances

  struct HistKey {
    std::array<std::int32_t, kMaxOrder - 1> ids{};
    std::uint8_t len = 0;
    bool operator==(const HistKey& other) const {
      if (len != other.len) return false;
      for (std::uint8_t i = 0; i < len; ++i)
        if (ids[i] != other.ids[i]) return false;
      return true;
    }
  };
  struct HistKeyHash {
    std::size_t operator()(const HistKey& key) const;
  };
  struct HistInfo {
    std::uint32_t begin = 0;  // range in cont_token/cont_count
    std::uint32_t end = 0;
    std::uint64_t total = 0;
  };
  struct Level {
    std::unordered_map<HistKey, HistInfo, HistKeyHash> histories;
    std::vector<std::int32_t> cont_token;
    std::vector<std::uint64_t> cont_count;
  };

  Vocabulary vocab_;
  Config config_;
  std::vector<Level> levels_;  // levels_[k] holds histories of length k

  static HistKey make_key(std::span<const std::int32_t> ids);
  const HistInfo* find_history(int k, std::span<const std::int32_t> history) const;
};

}  // namespace reviewforge
