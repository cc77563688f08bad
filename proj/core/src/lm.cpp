#include "reviewforge/lm.hpp"

#include <cmath>
#include <stdexcept>

namespace reviewforge {

double LanguageModel::sequence_logprob(std::span<const std::int32_t> context,
                                       std::span<const std::int32_t> review) const {
  std::vector<std::int32_t> prefix;
  prefix.reserve(review.size());
  double total = 0.0;
  for (size_t i = 0; i <= review.size(); ++i) {
    LogProbVector scores = next_token_logprobs(context, prefix);
    std::int32_t target = i < review.size() ? review[i] : vocabulary().eos_id();
    total += scores.at(static_cast<size_t>(target));
    if (i < review.size()) prefix.push_back(review[i]);
  }
  return total;
}

LogProbVector next_token_logprobs(const LanguageModel& lm, const Context& context,
                                  const TokenSequence& prefix) {
  const Vocabulary& vocab = lm.vocabulary();
  auto ctx_ids = vocab.encode(context.tokens());
  auto prefix_ids = vocab.encode(prefix);
  return lm.next_token_logprobs(ctx_ids, prefix_ids);
}

double perplexity(const LanguageModel& lm, const std::vector<ReviewPair>& eval) {
  if (eval.empty()) throw std::invalid_argument("perplexity needs a non-empty evaluation set");
  const Vocabulary& vocab = lm.vocabulary();
  double total_logprob = 0.0;
  std::uint64_t total_tokens = 0;
  for (const auto& pair : eval) {
    auto ctx_ids = vocab.encode(pair.context.tokens());
    auto review_ids = vocab.encode(pair.review);
    total_logprob += lm.sequence_logprob(ctx_ids, review_ids);
    total_tokens += review_ids.size() + 1;  // EOS counts as a scored position
  }
  return std::exp(-total_logprob / static_cast<double>(total_tokens));
}

std::int32_t best_token(const LogProbVector& scores) {
  std::int32_t best = -1;
  double best_score = 0.0;
  for (std::int32_t t = 0; t < static_cast<std::int32_t>(scores.size()); ++t) {
    if (t == Vocabulary::kUnkId) continue;
    if (best < 0 || scores[static_cast<size_t>(t)] > best_score) {
      best = t;
      best_score = scores[static_cast<size_t>(t)];
    }
  }
  return best;
}

std::vector<std::int32_t> greedy_decode_ids(const LanguageModel& lm,
                                            std::span<const std::int32_t> context, int max_len) {
  const std::int32_t eos = lm.vocabulary().eos_id();
  std::vector<std::int32_t> out;
  for (int step = 0; step < max_len; ++step) {
    LogProbVector scores = lm.next_token_logprobs(context, out);
    std::int32_t pick = best_token(scores);
    if (pick == eos) break;
    out.push_back(pick);
  }
  return out;
}

TokenSequence greedy_decode(const LanguageModel& lm, const Context& context, int max_len) {
  const Vocabulary& vocab = lm.vocabulary();
  auto ctx_ids = vocab.encode(context.tokens());
  auto ids = greedy_decode_ids(lm, ctx_ids, max_len);
  return vocab.decode(ids);
}

}  // namespace reviewforge
