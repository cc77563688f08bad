#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "reviewforge/lm.hpp"
#include "reviewforge/rng.hpp"

namespace reviewforge {

// Knobs for penalty-augmented decoding. b and lambda shape how aggressively
// the decoder is pushed off the most likely path; alpha decays the per-step
// start penalty. p_typo/p_spell ride along for the obfuscation pass so one
// struct describes a full generation profile.
struct GenerationParams {
  double b = 0.3;
  double lambda = -5.0;
  double alpha = 2.0 / 3.0;
  int min_len = 10;
  int max_len = 50;
  double p_typo = 0.0;
  double p_spell = 0.0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Tokens that receive only half penalties: function words that glue
// sentences together, plus punctuation. Membership is exact-token match on
// normalized tokens.
class GrammarSet {
 public:
  GrammarSet() = default;

  // ~60 pronouns/conjunctions/determiners plus every single-character
  // punctuation token.
  static GrammarSet defaults();

  // One token per line; blank lines and lines starting with '#' skipped.
  static GrammarSet load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  void insert(std::string token);
  bool contains(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }

  // mask[i] = 1 iff vocabulary token i is in the set; sized vocab.size()
  // (EOS has no mask entry; it is never penalized).
  std::vector<std::uint8_t> mask_for(const Vocabulary& vocab) const;

 private:
  std::unordered_set<std::string> tokens_;
};

// Per-review decoding state. review_mask is drawn once when the state is
// created; the rng then supplies the fresh per-step masks. memory holds each
// distinct generated token id in emission order.
struct PenaltyState {
  std::vector<std::uint8_t> review_mask;
  std::vector<std::int32_t> memory;
  int step = 0;
  Rng rng{0};

  void remember(std::int32_t id);
  bool in_memory(std::int32_t id) const;
};

// Draws the review-level mask from `rng` (consuming vocab_size draws), then
// keeps the generator for the per-step masks.
PenaltyState make_penalty_state(const GenerationParams& params, std::int32_t vocab_size, Rng rng);

// Each entry independently 1 with probability b.
std::vector<std::uint8_t> sample_bernoulli_mask(double b, std::int32_t size, Rng& rng);

// Adds `penalty` (halved for grammar-mask tokens) to the listed entries;
// everything else is untouched. penalty must be <= 0.
LogProbVector discount(const LogProbVector& logp, std::span<const std::int32_t> indices,
                       double penalty, const std::vector<std::uint8_t>& grammar_mask);

// Applies the three penalty sources, in order: the fixed review mask at
// strength lambda, a fresh Bernoulli(b) mask at strength lambda*alpha^step,
// and the memory set at strength lambda. Grammar tokens take half of each.
// Draws from state.rng; does not advance state.step.
LogProbVector augment(const LogProbVector& logp, const GenerationParams& params,
                      PenaltyState& state, const std::vector<std::uint8_t>& grammar_mask);

// Below min_len the EOS entry is forced to -inf; from max_len on, everything
// except EOS is. `step` is the number of tokens emitted so far.
LogProbVector enforce_length(const LogProbVector& logp, int step, int min_len, int max_len);
void enforce_length_inplace(LogProbVector& logp, int step, int min_len, int max_len);

struct GenerationResult {
  TokenSequence tokens;  // terminal EOS not included
  std::vector<std::int32_t> ids;
  std::uint64_t review_mask_hash = 0;  // stamps the sidecar metadata
};

// Penalty-augmented greedy decoding: score, augment, clamp length, take the
// best token (UNK never emitted), repeat until EOS. Obfuscation is a
// separate pass. Uses the stream derive_rng(params.seed, 0), so a single
// call equals element 0 of generate_batch with the same params.
GenerationResult generate_review(const LanguageModel& lm, const Context& context,
                                 const GenerationParams& params, const GrammarSet& grammar);

// One review per context, stream i derived from (params.seed, i); safe to
// run with several worker threads.
std::vector<GenerationResult> generate_batch(const LanguageModel& lm,
                                             const std::vector<Context>& contexts,
                                             const GenerationParams& params,
                                             const GrammarSet& grammar, unsigned jobs = 1);

}  // namespace reviewforge
