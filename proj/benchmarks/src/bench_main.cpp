#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "reviewforge/adaboost.hpp"
#include "reviewforge/harness.hpp"
#include "reviewforge/ngram_lm.hpp"
#include "reviewforge/obfuscate.hpp"
#include "reviewforge/penalty.hpp"
#include "reviewforge/sample_corpus.hpp"

namespace {

using namespace reviewforge;

// Shared desk-scale fixture: a small synthetic corpus, a trained model, and
// fitted feature machinery. Built once, on first use.
struct Fixture {
  std::vector<ReviewPair> pairs;
  std::optional<NgramLM> lm;
  GrammarSet grammar;
  std::vector<std::vector<std::int32_t>> context_ids;
  std::vector<TokenSequence> reviews;
  FeatureSpace space;
  std::vector<FeatureVector> vectors;
  std::vector<double> weights;
  SpellingRuleSet rules;
  KeyboardWeights kb;

  Fixture() {
    auto records = make_sample_records({.count = 2000, .seed = 7});
    pairs = make_pairs(records, {});
    Vocabulary vocab = Vocabulary::build(pairs, 5);
    lm.emplace(NgramLM::train(pairs, vocab, {}));
    grammar = GrammarSet::defaults();
    for (std::size_t i = 0; i < 64; ++i)
      context_ids.push_back(lm->vocabulary().encode(pairs[i].context.tokens()));
    for (std::size_t i = 0; i < 512; ++i) reviews.push_back(pairs[i].review);
    space = FeatureSpace::fit(reviews);
    vectors = space.extract_batch(reviews, Label::kHuman);
    for (std::size_t i = 0; i < vectors.size(); ++i)
      vectors[i].label = i % 2 == 0 ? Label::kHuman : Label::kMachine;
    weights.assign(vectors.size(), 1.0 / static_cast<double>(vectors.size()));
    rules = SpellingRuleSet::defaults();
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_NextTokenScores(benchmark::State& state) {
  const auto& f = fixture();
  std::vector<std::int32_t> prefix = {f.lm->vocabulary().id_of("the"),
                                      f.lm->vocabulary().id_of("food")};
  std::size_t i = 0;
  for (auto _ : state) {
    auto scores = f.lm->next_token_logprobs(f.context_ids[i++ % f.context_ids.size()], prefix);
    benchmark::DoNotOptimize(scores);
  }
}
BENCHMARK(BM_NextTokenScores);

void BM_GreedyDecode(benchmark::State& state) {
  const auto& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    auto ids = greedy_decode_ids(*f.lm, f.context_ids[i++ % f.context_ids.size()], 50);
    benchmark::DoNotOptimize(ids);
  }
}
BENCHMARK(BM_GreedyDecode);

void BM_GenerateReview(benchmark::State& state) {
  const auto& f = fixture();
  GenerationParams params;
  std::size_t i = 0;
  for (auto _ : state) {
    params.seed = i;
    auto result =
        generate_review(*f.lm, f.pairs[i % f.context_ids.size()].context, params, f.grammar);
    benchmark::DoNotOptimize(result);
    ++i;
  }
}
BENCHMARK(BM_GenerateReview);

void BM_FeatureExtract(benchmark::State& state) {
  const auto& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    auto fv = f.space.extract(f.reviews[i++ % f.reviews.size()]);
    benchmark::DoNotOptimize(fv);
  }
}
BENCHMARK(BM_FeatureExtract);

void BM_FitDepth2Tree(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto tree = fit_tree(f.vectors, f.weights, 2);
    benchmark::DoNotOptimize(tree);
  }
}
BENCHMARK(BM_FitDepth2Tree)->Unit(benchmark::kMillisecond);

void BM_Obfuscate(benchmark::State& state) {
  const auto& f = fixture();
  const Vocabulary& dict = f.lm->vocabulary();
  Rng rng(1);
  std::size_t i = 0;
  for (auto _ : state) {
    auto out = obfuscate(f.reviews[i++ % f.reviews.size()], 0.1, 0.1, f.rules, f.kb, dict, rng);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_Obfuscate);

void BM_TrainLm(benchmark::State& state) {
  const auto& f = fixture();
  Vocabulary vocab = Vocabulary::build(f.pairs, 5);
  for (auto _ : state) {
    auto lm = NgramLM::train(f.pairs, vocab, {});
    benchmark::DoNotOptimize(lm);
  }
}
BENCHMARK(BM_TrainLm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
