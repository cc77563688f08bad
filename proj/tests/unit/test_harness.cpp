#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "reviewforge/harness.hpp"
#include "reviewforge/ngram_lm.hpp"
#include "reviewforge/rng.hpp"
#include "reviewforge/text.hpp"

using namespace reviewforge;

namespace {

ReviewPair pair_of(std::vector<std::string> ctx, std::vector<std::string> review) {
  ReviewPair pair;
  pair.context.name = detokenize(ctx);
  pair.review = std::move(review);
  return pair;
}

NgramLM tiny_lm() {
  std::vector<ReviewPair> pairs = {
      pair_of({"cafe", "reno"}, {"the", "food", "was", "good"}),
      pair_of({"cafe", "reno"}, {"the", "food", "was", "bad"}),
      pair_of({"diner", "reno"}, {"the", "service", "was", "good"}),
      pair_of({"diner", "reno"}, {"food", "was", "good"}),
  };
  return NgramLM::train(pairs, Vocabulary::build(pairs, 1));
}

// Synthetic detector corpora: phrases drawn from a pool, with one marker
// token separating the classes when requested.
std::vector<TokenSequence> pool_docs(std::size_t count, std::uint64_t seed,
                                     const std::string& marker = {}) {
  static const std::vector<TokenSequence> phrases = {
      {"the", "food", "was", "great"},  {"service", "could", "be", "faster"},
      {"loved", "the", "atmosphere"},   {"portions", "were", "huge"},
      {"would", "not", "come", "back"}, {"prices", "are", "fair"},
      {"the", "staff", "was", "kind"},  {"dessert", "was", "stale"},
  };
  std::vector<TokenSequence> docs;
  docs.reserve(count);
  Rng rng(mix64(seed));
  for (std::size_t i = 0; i < count; ++i) {
    TokenSequence doc;
    std::size_t sentences = 1 + rng.next_below(3);
    for (std::size_t s = 0; s < sentences; ++s) {
      const auto& phrase = phrases[rng.next_below(phrases.size())];
      doc.insert(doc.end(), phrase.begin(), phrase.end());
      if (!marker.empty()) doc.push_back(marker);
      doc.push_back(".");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace

TEST_CASE("the default sweep grid holds the six cells") {
  auto grid = default_sweep_grid();
  REQUIRE(grid.size() == 6);
  std::vector<std::pair<double, double>> expected = {
      {0.3, -3.0}, {0.3, -5.0}, {0.5, -4.0}, {0.7, -3.0}, {0.7, -5.0}, {0.9, -4.0}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(grid[i].b == expected[i].first);
    CHECK(grid[i].lambda == expected[i].second);
  }
}

TEST_CASE("diversity statistics match a hand count") {
  std::vector<TokenSequence> reviews = {
      {"the", "food", "was", "good"},
      {"the", "food", "rocked"},
      {"great", "place"},
      {"the", "food"},
  };
  CellDiversity stats = diversity_stats(reviews, "sample");
  CHECK(stats.label == "sample");
  CHECK(stats.sample_size == 4);
  CHECK(stats.distinct_opening_bigrams == 2);
  CHECK(stats.max_opening_bigram_share == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(stats.top_opening_bigram == "the food");
  CHECK(stats.distinct_unigram_ratio == doctest::Approx(7.0 / 11.0).epsilon(1e-12));
  CHECK(stats.distinct_bigram_ratio == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
  CHECK(stats.mean_length == doctest::Approx(11.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("diversity statistics tolerate short and empty samples") {
  CellDiversity empty = diversity_stats({}, "none");
  CHECK(empty.sample_size == 0);
  CHECK(empty.distinct_opening_bigrams == 0);
  CHECK(empty.max_opening_bigram_share == 0.0);
  CHECK(empty.mean_length == 0.0);

  std::vector<TokenSequence> shorts = {{"wow"}, {"wow"}};
  CellDiversity stats = diversity_stats(shorts, "short");
  CHECK(stats.distinct_opening_bigrams == 1);  // single-token opener
  CHECK(stats.max_opening_bigram_share == doctest::Approx(1.0));
  CHECK(stats.top_opening_bigram == "wow");
  CHECK(stats.distinct_bigram_ratio == 0.0);  // no bigrams at all
  CHECK(stats.distinct_unigram_ratio == doctest::Approx(0.5));
}

TEST_CASE("experiment splits hold out round(f*n) clamped to [1, n-1]") {
  std::vector<TokenSequence> docs;
  for (int i = 0; i < 10; ++i) docs.push_back({"doc" + std::to_string(i)});

  CorpusSplit split = split_for_experiment(docs, 1.0 / 3.0, Rng(4));
  CHECK(split.test.size() == 3);  // round(10/3)
  CHECK(split.train.size() == 7);

  CorpusSplit again = split_for_experiment(docs, 1.0 / 3.0, Rng(4));
  CHECK(again.test == split.test);
  CHECK(again.train == split.train);

  std::multiset<std::string> before, after;
  for (const auto& d : docs) before.insert(d[0]);
  for (const auto& d : split.test) after.insert(d[0]);
  for (const auto& d : split.train) after.insert(d[0]);
  CHECK(before == after);

  CHECK(split_for_experiment(docs, 0.0001, Rng(1)).test.size() == 1);   // clamp up
  CHECK(split_for_experiment(docs, 0.99, Rng(1)).test.size() == 9);     // clamp down
  CHECK(split_for_experiment(docs, 1.0, Rng(1)).test.size() == 9);

  std::vector<TokenSequence> one = {{"solo"}};
  CorpusSplit tiny = split_for_experiment(one, 0.5, Rng(1));
  CHECK(tiny.train.size() == 1);
  CHECK(tiny.test.empty());
  CHECK(split_for_experiment({}, 0.5, Rng(1)).train.empty());
  CHECK_THROWS_AS(split_for_experiment(docs, -0.1, Rng(1)), std::invalid_argument);
  CHECK_THROWS_AS(split_for_experiment(docs, 1.5, Rng(1)), std::invalid_argument);
}

TEST_CASE("run_sweep prepends the greedy baseline and labels cells") {
  NgramLM lm = tiny_lm();
  Context cafe;
  cafe.name = "cafe reno";
  Context diner;
  diner.name = "diner reno";

  SweepConfig config;
  config.cells = {{0.3, -5.0}, {0.7, -3.0}};
  config.reviews_per_cell = 4;
  config.seed = 11;
  config.base.min_len = 2;
  config.base.max_len = 12;
  SweepResult result = run_sweep(lm, {cafe, diner}, config, GrammarSet::defaults());

  REQUIRE(result.reviews.size() == 3);  // baseline + 2 cells
  REQUIRE(result.report.cells.size() == 3);
  for (const auto& cell : result.reviews) CHECK(cell.size() == 4);

  CHECK(result.report.cells[0].label == "greedy");
  CHECK(result.report.cells[0].b == 0.0);
  CHECK(result.report.cells[0].lambda == 0.0);
  CHECK(result.report.cells[1].label == "b=0.3 lambda=-5");
  CHECK(result.report.cells[2].label == "b=0.7 lambda=-3");
  CHECK(result.report.cells[1].sample_size == 4);
  CHECK(result.report.config_hash != 0);

  // The baseline is deterministic, so all four greedy reviews from the same
  // context are identical; contexts alternate cafe/diner.
  CHECK(result.reviews[0][0] == result.reviews[0][2]);
  CHECK(result.reviews[0][1] == result.reviews[0][3]);

  SweepResult repeat = run_sweep(lm, {cafe, diner}, config, GrammarSet::defaults());
  CHECK(repeat.reviews == result.reviews);

  std::string csv = result.report.csv();
  CHECK(csv.find("label,b,lambda,sample_size") == 0);
  CHECK(csv.find("\"greedy\"") != std::string::npos);
  std::string pretty = result.report.pretty();
  CHECK(pretty.find("greedy") != std::string::npos);
}

TEST_CASE("run_sweep with zero reviews per cell is an empty report") {
  NgramLM lm = tiny_lm();
  Context cafe;
  cafe.name = "cafe reno";
  SweepConfig config;
  config.cells = {{0.3, -5.0}};
  config.reviews_per_cell = 0;
  SweepResult result = run_sweep(lm, {cafe}, config, GrammarSet::defaults());
  REQUIRE(result.reviews.size() == 2);
  CHECK(result.reviews[0].empty());
  CHECK(result.reviews[1].empty());
  CHECK(result.report.cells[0].sample_size == 0);
}

TEST_CASE("detector experiment separates marked classes and reports held-out scores") {
  auto human = pool_docs(60, 1);
  auto machine = pool_docs(60, 2, "qq");

  DetectorExperimentOptions options;
  options.min_per_class = 20;
  options.boost.rounds = 8;
  options.histogram_bins = 4;
  options.split_seed = 5;
  DetectorExperimentResult result = detector_experiment(human, machine, options);

  // round(60/3) = 20 held out per class.
  CHECK(result.report.total == 40);
  CHECK(result.report.machine.support == 20);
  CHECK(result.report.human.support == 20);
  CHECK(result.report.accuracy == doctest::Approx(1.0));  // marker token separates
  CHECK(result.report.macro_f1 == doctest::Approx(1.0));
  CHECK(result.report.warnings.empty());
  CHECK(result.report.config_hash != 0);

  std::size_t human_count = 0, machine_count = 0;
  for (auto c : result.histogram.human) human_count += c;
  for (auto c : result.histogram.machine) machine_count += c;
  CHECK(human_count == 20);
  CHECK(machine_count == 20);

  // The persisted detector classifies raw token sequences directly.
  double margin = 0.0;
  CHECK(result.detector.classify(machine[0], &margin) == Label::kMachine);
  CHECK(margin > 0.0);
  CHECK(result.detector.classify(human[0]) == Label::kHuman);
}

TEST_CASE("detector experiment enforces the per-class minimum") {
  auto human = pool_docs(30, 1);
  auto machine = pool_docs(10, 2, "qq");
  DetectorExperimentOptions options;
  options.min_per_class = 20;
  CHECK_THROWS_AS(detector_experiment(human, machine, options), std::invalid_argument);
}

TEST_CASE("imbalanced corpora add a warning") {
  auto human = pool_docs(64, 1);
  auto machine = pool_docs(30, 2, "qq");
  DetectorExperimentOptions options;
  options.min_per_class = 10;
  options.boost.rounds = 4;
  DetectorExperimentResult result = detector_experiment(human, machine, options);
  REQUIRE(!result.report.warnings.empty());
  CHECK(result.report.warnings[0].find("imbalance") != std::string::npos);
}

TEST_CASE("two identically distributed classes score near chance") {
  // Both "classes" come from the same pool; only the rng stream differs.
  auto a = pool_docs(900, 31);
  auto b = pool_docs(900, 32);
  DetectorExperimentOptions options;
  options.min_per_class = 100;
  options.boost.rounds = 15;
  options.split_seed = 9;
  DetectorExperimentResult result = detector_experiment(a, b, options);
  // 300 held out per class; anything the booster finds is noise.
  CHECK(result.report.macro_f1 > 0.40);
  CHECK(result.report.macro_f1 < 0.60);
}

TEST_CASE("transfer matrix diagonal equals the single-category experiment") {
  auto human = pool_docs(60, 3);
  std::vector<NamedCorpus> categories = {
      {"alpha", pool_docs(60, 4, "qq")},
      {"beta", pool_docs(60, 5, "vv")},
  };
  TransferOptions options;
  options.boost.rounds = 8;
  options.seed = 21;
  TransferMatrix matrix = transfer_experiment(human, categories, options);

  REQUIRE(matrix.categories.size() == 2);
  REQUIRE(matrix.cells.size() == 2);
  REQUIRE(matrix.cells[0].size() == 2);
  CHECK(matrix.categories[0] == "alpha");
  CHECK(matrix.config_hash != 0);

  // Category 0 uses the same derived split streams as a standalone
  // experiment with matching settings, so the diagonal cell is identical.
  DetectorExperimentOptions single;
  single.features = options.features;
  single.boost = options.boost;
  single.split_seed = options.seed;
  single.test_fraction = options.test_fraction;
  single.min_per_class = 10;
  DetectorExperimentResult direct = detector_experiment(human, categories[0].second, single);
  CHECK(matrix.cells[0][0].macro_f1 == doctest::Approx(direct.report.macro_f1).epsilon(1e-12));
  CHECK(matrix.cells[0][0].machine_recall ==
        doctest::Approx(direct.report.machine.recall).epsilon(1e-12));

  // Markers make every detector perfect on its own category.
  CHECK(matrix.cells[0][0].macro_f1 == doctest::Approx(1.0));
  CHECK(matrix.cells[1][1].macro_f1 == doctest::Approx(1.0));

  std::string csv = matrix.csv();
  CHECK(csv.find("train_category,eval_category,macro_f1,machine_recall") == 0);
  CHECK(csv.find("\"alpha\",\"beta\"") != std::string::npos);
  std::string pretty = matrix.pretty();
  CHECK(pretty.find("alpha") != std::string::npos);

  CHECK_THROWS_AS(transfer_experiment(human, {categories[0]}, options),
                  std::invalid_argument);
}
