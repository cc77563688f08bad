#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "reviewforge/io.hpp"
#include "reviewforge/ngram_lm.hpp"

using namespace reviewforge;
namespace fs = std::filesystem;

namespace {

ReviewPair pair_of(std::vector<std::string> ctx, std::vector<std::string> review) {
  ReviewPair pair;
  pair.context.name = detokenize(ctx);
  pair.review = std::move(review);
  return pair;
}

std::vector<ReviewPair> tiny_corpus() {
  return {
      pair_of({"cafe", "reno"}, {"the", "food", "was", "good"}),
      pair_of({"cafe", "reno"}, {"the", "food", "was", "bad"}),
      pair_of({"diner", "reno"}, {"the", "service", "was", "good"}),
      pair_of({"diner", "reno"}, {"food", "was", "good"}),
  };
}

// Reference counts rebuilt from scratch: history (as an id vector) -> token
// -> count, one map per history length, counting exactly the positions that
// predict a review token or the terminal EOS.
using OracleCounts = std::vector<std::map<std::vector<std::int32_t>, std::map<std::int32_t, std::uint64_t>>>;

OracleCounts oracle_counts(const std::vector<ReviewPair>& pairs, const Vocabulary& vocab,
                           int order) {
  OracleCounts counts(static_cast<std::size_t>(order));
  for (const auto& pair : pairs) {
    std::vector<std::int32_t> seq = vocab.encode(pair.context.tokens());
    std::size_t ctx_len = seq.size();
    for (const auto& id : vocab.encode(pair.review)) seq.push_back(id);
    seq.push_back(vocab.eos_id());
    for (std::size_t p = ctx_len; p < seq.size(); ++p) {
      for (int k = 0; k < order; ++k) {
        if (p < static_cast<std::size_t>(k)) break;
        std::vector<std::int32_t> hist(seq.begin() + static_cast<std::ptrdiff_t>(p - k),
                                       seq.begin() + static_cast<std::ptrdiff_t>(p));
        ++counts[static_cast<std::size_t>(k)][hist][seq[p]];
      }
    }
  }
  return counts;
}

// Reference probability: start from the uniform floor, then for each level
// whose history was observed, rescale by gamma = D*distinct/total and add the
// discounted relative frequency. Levels with unseen histories pass through.
double oracle_prob(const OracleCounts& counts, std::int32_t alphabet, double discount,
                   const std::vector<std::int32_t>& full_history, std::int32_t token) {
  double p = 1.0 / static_cast<double>(alphabet);
  int max_hist = static_cast<int>(counts.size()) - 1;
  if (static_cast<int>(full_history.size()) < max_hist)
    max_hist = static_cast<int>(full_history.size());
  for (int k = 0; k <= max_hist; ++k) {
    std::vector<std::int32_t> hist(full_history.end() - k, full_history.end());
    auto it = counts[static_cast<std::size_t>(k)].find(hist);
    if (it == counts[static_cast<std::size_t>(k)].end()) continue;
    double total = 0.0;
    for (const auto& [tok, c] : it->second) total += static_cast<double>(c);
    double gamma = discount * static_cast<double>(it->second.size()) / total;
    double c = 0.0;
    auto jt = it->second.find(token);
    if (jt != it->second.end()) c = static_cast<double>(jt->second);
    double mle = c > 0.0 ? (c - discount) / total : 0.0;
    p = gamma * p + mle;
  }
  return p;
}

}  // namespace

TEST_CASE("next_token_logprobs matches a from-scratch reference model") {
  auto pairs = tiny_corpus();
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  NgramConfig config{.order = 4, .discount = 0.75};
  NgramLM lm = NgramLM::train(pairs, vocab, config);
  OracleCounts counts = oracle_counts(pairs, vocab, config.order);

  auto ctx = vocab.encode(TokenSequence{"cafe", "reno"});
  std::vector<std::vector<std::int32_t>> prefixes = {
      {},
      vocab.encode(TokenSequence{"the"}),
      vocab.encode(TokenSequence{"the", "food"}),
      vocab.encode(TokenSequence{"the", "food", "was"}),
      vocab.encode(TokenSequence{"service", "was", "bad", "the"}),
      vocab.encode(TokenSequence{"unseen-token-form"}),
  };
  for (const auto& prefix : prefixes) {
    CAPTURE(prefix.size());
    LogProbVector scores = lm.next_token_logprobs(ctx, prefix);
    REQUIRE(scores.size() == static_cast<std::size_t>(vocab.scored_size()));
    std::vector<std::int32_t> full = ctx;
    full.insert(full.end(), prefix.begin(), prefix.end());
    double sum = 0.0;
    for (std::int32_t t = 0; t < vocab.scored_size(); ++t) {
      double expected = oracle_prob(counts, vocab.scored_size(), config.discount, full, t);
      double actual = std::exp(scores[static_cast<std::size_t>(t)]);
      CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
      CHECK(std::isfinite(scores[static_cast<std::size_t>(t)]));
      sum += actual;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("token_prob agrees with the vector path") {
  auto pairs = tiny_corpus();
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  NgramLM lm = NgramLM::train(pairs, vocab, {.order = 3, .discount = 0.5});

  auto ctx = vocab.encode(TokenSequence{"diner", "reno"});
  auto prefix = vocab.encode(TokenSequence{"the", "service"});
  LogProbVector scores = lm.next_token_logprobs(ctx, prefix);
  std::vector<std::int32_t> full = ctx;
  full.insert(full.end(), prefix.begin(), prefix.end());
  for (std::int32_t t = 0; t < vocab.scored_size(); ++t) {
    CHECK(lm.token_prob(full, t) ==
          doctest::Approx(std::exp(scores[static_cast<std::size_t>(t)])).epsilon(1e-12));
  }
}

TEST_CASE("histories reach back into the context prefix") {
  // "reno the" only ever continues with "food" after cafe/diner contexts; if
  // context tokens were invisible, a history of one review token could not
  // distinguish the two restaurants.
  auto pairs = std::vector<ReviewPair>{
      pair_of({"cafe"}, {"alpha"}),
      pair_of({"diner"}, {"beta"}),
  };
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  NgramLM lm = NgramLM::train(pairs, vocab, {.order = 2, .discount = 0.75});
  auto cafe = vocab.encode(TokenSequence{"cafe"});
  auto diner = vocab.encode(TokenSequence{"diner"});
  LogProbVector after_cafe = lm.next_token_logprobs(cafe, {});
  LogProbVector after_diner = lm.next_token_logprobs(diner, {});
  std::int32_t alpha = vocab.id_of("alpha");
  std::int32_t beta = vocab.id_of("beta");
  CHECK(after_cafe[static_cast<std::size_t>(alpha)] >
        after_cafe[static_cast<std::size_t>(beta)]);
  CHECK(after_diner[static_cast<std::size_t>(beta)] >
        after_diner[static_cast<std::size_t>(alpha)]);
}

TEST_CASE("sequence_logprob sums stepwise scores including EOS") {
  auto pairs = tiny_corpus();
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  NgramLM lm = NgramLM::train(pairs, vocab);

  auto ctx = vocab.encode(TokenSequence{"cafe", "reno"});
  auto review = vocab.encode(TokenSequence{"the", "food", "was", "good"});
  double expected = 0.0;
  std::vector<std::int32_t> prefix;
  for (std::size_t i = 0; i <= review.size(); ++i) {
    LogProbVector scores = lm.next_token_logprobs(ctx, prefix);
    std::int32_t target = i < review.size() ? review[i] : vocab.eos_id();
    expected += scores[static_cast<std::size_t>(target)];
    if (i < review.size()) prefix.push_back(review[i]);
  }
  CHECK(lm.sequence_logprob(ctx, review) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("perplexity is exp of mean negative log-probability") {
  auto pairs = tiny_corpus();
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  NgramLM lm = NgramLM::train(pairs, vocab);

  std::vector<ReviewPair> eval = {pairs[0], pairs[2]};
  double total = 0.0;
  std::uint64_t tokens = 0;
  for (const auto& pair : eval) {
    auto ctx = vocab.encode(pair.context.tokens());
    auto review = vocab.encode(pair.review);
    total += lm.sequence_logprob(ctx, review);
    tokens += review.size() + 1;
  }
  CHECK(perplexity(lm, eval) ==
        doctest::Approx(std::exp(-total / static_cast<double>(tokens))).epsilon(1e-12));
  CHECK_THROWS_AS(perplexity(lm, {}), std::invalid_argument);
}

TEST_CASE("best_token skips UNK and breaks ties to the lowest index") {
  LogProbVector scores = {10.0, -1.0, -0.5, -0.5, -2.0};
  CHECK(best_token(scores) == 2);  // index 0 would win but UNK never surfaces
  LogProbVector eos_best = {0.0, -3.0, -3.0, -3.0, -1.0};
  CHECK(best_token(eos_best) == 4);
}

TEST_CASE("greedy decode emits the modal continuation and stops at EOS") {
  auto pairs = tiny_corpus();
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  NgramLM lm = NgramLM::train(pairs, vocab);

  Context ctx;
  ctx.name = "cafe reno";
  TokenSequence decoded = greedy_decode(lm, ctx, 50);
  REQUIRE(decoded.size() >= 3);
  CHECK(decoded[0] == "the");
  CHECK(decoded[1] == "food");
  CHECK(decoded[2] == "was");
  CHECK(decoded.size() <= 50);
  for (const auto& tok : decoded) {
    CHECK(tok != Vocabulary::kUnkToken);
    CHECK(tok != Vocabulary::kEosToken);
  }

  TokenSequence capped = greedy_decode(lm, ctx, 2);
  CHECK(capped.size() <= 2);
}

TEST_CASE("training validates configuration") {
  auto pairs = tiny_corpus();
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  CHECK_THROWS_AS(NgramLM::train({}, vocab), std::invalid_argument);
  CHECK_THROWS_AS(NgramLM::train(pairs, vocab, {.order = 1}), std::invalid_argument);
  CHECK_THROWS_AS(NgramLM::train(pairs, vocab, {.order = 9}), std::invalid_argument);
  CHECK_THROWS_AS(NgramLM::train(pairs, vocab, {.order = 4, .discount = 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NgramLM::train(pairs, vocab, {.order = 4, .discount = 1.0}),
                  std::invalid_argument);
}

TEST_CASE("model files round-trip and are byte-stable") {
  auto pairs = tiny_corpus();
  Vocabulary vocab = Vocabulary::build(pairs, 1);
  NgramLM lm = NgramLM::train(pairs, vocab, {.order = 3, .discount = 0.6});

  fs::path dir = fs::temp_directory_path() / "reviewforge_test_lm";
  fs::create_directories(dir);
  lm.save(dir / "a.bin");
  lm.save(dir / "b.bin");
  CHECK(read_file(dir / "a.bin") == read_file(dir / "b.bin"));

  NgramLM loaded = NgramLM::load(dir / "a.bin");
  CHECK(loaded.config().order == 3);
  CHECK(loaded.config().discount == doctest::Approx(0.6));
  CHECK(loaded.vocabulary().hash() == lm.vocabulary().hash());

  auto ctx = lm.vocabulary().encode(TokenSequence{"cafe", "reno"});
  auto prefix = lm.vocabulary().encode(TokenSequence{"the"});
  LogProbVector before = lm.next_token_logprobs(ctx, prefix);
  LogProbVector after = loaded.next_token_logprobs(ctx, prefix);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);

  write_file(dir / "bad.bin", "NOPE....");
  CHECK_THROWS_AS(NgramLM::load(dir / "bad.bin"), std::runtime_error);
  fs::remove_all(dir);
}
