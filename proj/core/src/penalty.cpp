#include "reviewforge/penalty.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reviewforge/hash.hpp"
#include "reviewforge/io.hpp"
#include "reviewforge/parallel.hpp"
#include "reviewforge/text.hpp"

namespace reviewforge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const char* const kDefaultGrammarWords[] = {
    // pronouns
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it",
    "its", "itself", "they", "them", "their", "theirs", "themselves", "this", "that", "these",
    "those", "who", "whom", "which", "what",
    // conjunctions and connectives
    "and", "or", "but", "nor", "so", "yet", "for", "if", "then", "than", "because", "although",
    "though", "while", "whereas", "thus", "hence", "therefore", "however", "also", "both",
    "either", "neither", "when", "where", "as",
    // articles and common glue
    "a", "an", "the", "to", "of", "in", "on", "at", "by", "with", "is", "are", "was", "were",
    "be", "been", "not"};

}  // namespace

void GenerationParams::validate() const {
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("b must be in [0, 1]");
  if (!(lambda <= 0.0)) throw std::invalid_argument("lambda must be <= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (min_len < 0) throw std::invalid_argument("min_len must be >= 0");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (min_len > max_len) throw std::invalid_argument("min_len must not exceed max_len");
  if (!(p_typo >= 0.0 && p_typo <= 1.0)) throw std::invalid_argument("p_typo must be in [0, 1]");
  if (!(p_spell >= 0.0 && p_spell <= 1.0))
    throw std::invalid_argument("p_spell must be in [0, 1]");
}

GrammarSet GrammarSet::defaults() {
  GrammarSet g;
  for (const char* word : kDefaultGrammarWords) g.insert(word);
  for (int c = 0x21; c <= 0x7e; ++c) {
    if (std::isalnum(c)) continue;
    g.insert(std::string(1, static_cast<char>(c)));
  }
  return g;
}

GrammarSet GrammarSet::load(const std::filesystem::path& path) {
  GrammarSet g;
  for (const auto& line : read_lines(path)) {
    std::string cleaned = clean_text(line);
    if (cleaned.empty() || cleaned[0] == '#') continue;
    for (auto& tok : tokenize(cleaned)) g.insert(std::move(tok));
  }
  return g;
}

void GrammarSet::save(const std::filesystem::path& path) const {
  std::vector<std::string> lines(tokens_.begin(), tokens_.end());
  std::sort(lines.begin(), lines.end());
  write_lines(path, lines);
}

void GrammarSet::insert(std::string token) { tokens_.insert(std::move(token)); }

bool GrammarSet::contains(std::string_view token) const {
  return tokens_.find(std::string(token)) != tokens_.end();
}

std::vector<std::uint8_t> GrammarSet::mask_for(const Vocabulary& vocab) const {
  std::vector<std::uint8_t> mask(static_cast<size_t>(vocab.size()), 0);
  for (std::int32_t i = 0; i < vocab.size(); ++i)
    mask[static_cast<size_t>(i)] = contains(vocab.token_of(i)) ? 1 : 0;
  return mask;
}

void PenaltyState::remember(std::int32_t id) {
  if (!in_memory(id)) memory.push_back(id);
}

bool PenaltyState::in_memory(std::int32_t id) const {
  return std::find(memory.begin(), memory.end(), id) != memory.end();
}

PenaltyState make_penalty_state(const GenerationParams& params, std::int32_t vocab_size,
                                Rng rng) {
  PenaltyState state;
  state.review_mask = sample_bernoulli_mask(params.b, vocab_size, rng);
  state.rng = rng;
  return state;
}

std::vector<std::uint8_t> sample_bernoulli_mask(double b, std::int32_t size, Rng& rng) {
  std::vector<std::uint8_t> mask(static_cast<size_t>(size));
  for (auto& bit : mask) bit = rng.next_bernoulli(b) ? 1 : 0;
  return mask;
}

namespace {

// Shared by discount/augment so all penalty sources use identical
// arithmetic: += penalty, halved for grammar tokens.
inline void apply_penalty(LogProbVector& logp, std::size_t index, double penalty,
                          const std::vector<std::uint8_t>& grammar_mask) {
  logp[index] += (index < grammar_mask.size() && grammar_mask[index]) ? penalty / 2.0 : penalty;
}

}  // namespace

LogProbVector discount(const LogProbVector& logp, std::span<const std::int32_t> indices,
                       double penalty, const std::vector<std::uint8_t>& grammar_mask) {
  if (penalty > 0.0) throw std::invalid_argument("penalty must be <= 0");
  LogProbVector out = logp;
  for (std::int32_t idx : indices) {
    auto u = static_cast<std::size_t>(idx);
    if (idx < 0 || u >= out.size()) throw std::out_of_range("penalty index out of range");
    apply_penalty(out, u, penalty, grammar_mask);
  }
  return out;
}

LogProbVector augment(const LogProbVector& logp, const GenerationParams& params,
                      PenaltyState& state, const std::vector<std::uint8_t>& grammar_mask) {
  LogProbVector out = logp;
  const std::size_t masked = state.review_mask.size();  // |V|, EOS exempt

  for (std::size_t i = 0; i < masked; ++i)
    if (state.review_mask[i]) apply_penalty(out, i, params.lambda, grammar_mask);

  const double start_penalty = params.lambda * std::pow(params.alpha, state.step);
  std::vector<std::uint8_t> fresh =
      sample_bernoulli_mask(params.b, static_cast<std::int32_t>(masked), state.rng);
  for (std::size_t i = 0; i < masked; ++i)
    if (fresh[i]) apply_penalty(out, i, start_penalty, grammar_mask);

  for (std::int32_t id : state.memory)
    apply_penalty(out, static_cast<std::size_t>(id), params.lambda, grammar_mask);

  return out;
}

LogProbVector enforce_length(const LogProbVector& logp, int step, int min_len, int max_len) {
  LogProbVector out = logp;
  enforce_length_inplace(out, step, min_len, max_len);
  return out;
}

void enforce_length_inplace(LogProbVector& logp, int step, int min_len, int max_len) {
  if (min_len > max_len) throw std::invalid_argument("min_len must not exceed max_len");
  if (logp.empty()) return;
  const std::size_t eos = logp.size() - 1;
  if (step < min_len) logp[eos] = kNegInf;
  if (step >= max_len) {
    for (std::size_t i = 0; i < eos; ++i) logp[i] = kNegInf;
  }
}

namespace {

GenerationResult generate_with_stream(const LanguageModel& lm, const Context& context,
                                      const GenerationParams& params, const GrammarSet& grammar,
                                      Rng rng) {
  const Vocabulary& vocab = lm.vocabulary();
  const auto ctx_ids = vocab.encode(context.tokens());
  const auto grammar_mask = grammar.mask_for(vocab);
  PenaltyState state = make_penalty_state(params, vocab.size(), rng);

  GenerationResult result;
  result.review_mask_hash =
      fnv1a(std::string_view(reinterpret_cast<const char*>(state.review_mask.data()),
                             state.review_mask.size()));
  const std::int32_t eos = vocab.eos_id();
  while (true) {
    LogProbVector scores = lm.next_token_logprobs(ctx_ids, result.ids);
    LogProbVector augmented = augment(scores, params, state, grammar_mask);
    enforce_length_inplace(augmented, state.step, params.min_len, params.max_len);
    std::int32_t pick = best_token(augmented);
    if (pick == eos) break;
    result.ids.push_back(pick);
    state.remember(pick);
    ++state.step;
  }
  result.tokens = vocab.decode(result.ids);
  return result;
}

}  // namespace

GenerationResult generate_review(const LanguageModel& lm, const Context& context,
                                 const GenerationParams& params, const GrammarSet& grammar) {
  params.validate();
  return generate_with_stream(lm, context, params, grammar, derive_rng(params.seed, 0));
}

std::vector<GenerationResult> generate_batch(const LanguageModel& lm,
                                             const std::vector<Context>& contexts,
                                             const GenerationParams& params,
                                             const GrammarSet& grammar, unsigned jobs) {
  params.validate();
  std::vector<GenerationResult> results(contexts.size());
  parallel_for(contexts.size(), jobs, [&](std::size_t i) {
    results[i] = generate_with_stream(lm, contexts[i], params, grammar,
                                      derive_rng(params.seed, i));
  });
  return results;
}

}  // namespace reviewforge
