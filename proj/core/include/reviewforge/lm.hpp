#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "reviewforge/corpus.hpp"
#include "reviewforge/vocabulary.hpp"

namespace reviewforge {

// Log-probabilities over the full alphabet, indexed by vocabulary id,
// EOS last; length is vocabulary().scored_size(). Entries are finite and
// exp-sum to 1.
using LogProbVector = std::vector<double>;

// Next-token scorer: p(t | context, prefix). Implementations must be
// immutable after construction so many generation workers can score
// concurrently.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual const Vocabulary& vocabulary() const = 0;

  virtual LogProbVector next_token_logprobs(std::span<const std::int32_t> context,
                                            std::span<const std::int32_t> prefix) const = 0;

  // log p(review, EOS | context). The default walks next_token_logprobs;
  // implementations may override with a cheaper scalar path.
  virtual double sequence_logprob(std::span<const std::int32_t> context,
                                  std::span<const std::int32_t> review) const;
};

LogProbVector next_token_logprobs(const LanguageModel& lm, const Context& context,
                                  const TokenSequence& prefix);

// exp of mean negative log-probability per token, EOS positions included.
double perplexity(const LanguageModel& lm, const std::vector<ReviewPair>& eval);

// Unaugmented baseline: repeatedly takes the most likely token (ties to the
// lowest index, UNK never emitted) until EOS or max_len.
std::vector<std::int32_t> greedy_decode_ids(const LanguageModel& lm,
                                            std::span<const std::int32_t> context, int max_len);
TokenSequence greedy_decode(const LanguageModel& lm, const Context& context, int max_len = 50);

// Argmax over scores skipping UNK; ties break to the lowest index.
std::int32_t best_token(const LogProbVector& scores);

}  // namespace reviewforge
