#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "reviewforge/corpus.hpp"
#include "reviewforge/lm.hpp"
#include "reviewforge/penalty.hpp"
#include "reviewforge/report.hpp"

namespace reviewforge {

struct SweepCell {
  double b = 0.0;
  double lambda = 0.0;
};

// The six default parameter cells explored by the sweep.
std::vector<SweepCell> default_sweep_grid();

struct SweepConfig {
  std::vector<SweepCell> cells = default_sweep_grid();
  std::size_t reviews_per_cell = 200;
  std::uint64_t seed = 0;
  // alpha, length limits and obfuscation knobs shared by every cell;
  // b, lambda and the per-cell seed are overridden cell by cell.
  GenerationParams base;
  unsigned jobs = 0;
};

struct CellDiversity {
  std::string label;
  double b = 0.0;
  double lambda = 0.0;
  std::size_t sample_size = 0;
  std::size_t distinct_opening_bigrams = 0;
  double max_opening_bigram_share = 0.0;  // in [0,1]
  std::string top_opening_bigram;
  double distinct_unigram_ratio = 0.0;  // distinct unigrams / total tokens
  double distinct_bigram_ratio = 0.0;   // distinct bigrams / total bigrams
  double mean_length = 0.0;             // tokens per review
};

// How repetitive each decoding setting is. cells[0] is always the
// unpenalized greedy baseline; penalized cells follow in config order.
struct DiversityReport {
  std::vector<CellDiversity> cells;
  std::uint64_t config_hash = 0;

  std::string csv() const;
  std::string pretty() const;
};

// Opening-bigram concentration and distinct-n ratios for one sample.
CellDiversity diversity_stats(const std::vector<TokenSequence>& reviews, std::string label);

struct SweepResult {
  // reviews[c][i]: cell c's i-th review; index 0 is the greedy baseline.
  std::vector<std::vector<TokenSequence>> reviews;
  DiversityReport report;
};

// Generates reviews_per_cell reviews for the baseline plus every cell,
// cycling through `contexts`, each cell on its own seed stream derived from
// config.seed. reviews_per_cell == 0 yields an empty (error-free) report.
SweepResult run_sweep(const LanguageModel& lm, const std::vector<Context>& contexts,
                      const SweepConfig& config, const GrammarSet& grammar);

struct CorpusSplit {
  std::vector<TokenSequence> train;
  std::vector<TokenSequence> test;
};

// Shuffles a copy and holds out round(test_fraction * n) documents (at
// least 1, at most n-1) as the test side.
CorpusSplit split_for_experiment(const std::vector<TokenSequence>& docs, double test_fraction,
                                 Rng rng);

struct DetectorExperimentOptions {
  FeatureConfig features;
  BoostOptions boost;
  std::uint64_t split_seed = 0;
  double test_fraction = 1.0 / 3.0;
  std::size_t min_per_class = 1000;
  double imbalance_warn_ratio = 1.5;
  int histogram_bins = 20;
  unsigned jobs = 0;
};

struct DetectorExperimentResult {
  ClassificationReport report;  // held-out split only
  MarginHistogram histogram;    // held-out margins per class
  DetectorModel detector;       // fitted space + ensemble, ready to persist
};

// Splits each class with its own stream off split_seed, fits the feature
// space on the training side only, boosts, and evaluates held-out. Throws
// std::invalid_argument when either corpus is smaller than min_per_class;
// class sizes further apart than imbalance_warn_ratio add a report warning.
DetectorExperimentResult detector_experiment(const std::vector<TokenSequence>& human,
                                             const std::vector<TokenSequence>& machine,
                                             const DetectorExperimentOptions& options);

struct TransferOptions {
  // Character n-grams only: the one feature family that transfers across
  // generator settings without keying on specific vocabulary.
  FeatureConfig features{.readability = false,
                         .pos_ngrams = false,
                         .word_unigrams = false,
                         .char_ngrams = true};
  BoostOptions boost;
  std::uint64_t seed = 0;
  double test_fraction = 1.0 / 3.0;
  unsigned jobs = 0;
};

struct TransferCell {
  double macro_f1 = 0.0;
  double machine_recall = 0.0;
};

// cells[i][j]: detector trained on category i vs human, evaluated on
// category j's held-out reviews vs held-out human. Diagonal entries match
// detector_experiment on that category.
struct TransferMatrix {
  std::vector<std::string> categories;
  std::vector<std::vector<TransferCell>> cells;
  std::uint64_t config_hash = 0;

  std::string csv() const;
  std::string pretty() const;
};

using NamedCorpus = std::pair<std::string, std::vector<TokenSequence>>;

// Cross-category detectability. Requires >= 2 machine categories; the human
// corpus is split once and shared by every row.
TransferMatrix transfer_experiment(const std::vector<TokenSequence>& human,
                                   const std::vector<NamedCorpus>& categories,
                                   const TransferOptions& options);

}  // namespace reviewforge
