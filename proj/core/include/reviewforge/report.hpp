#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "reviewforge/adaboost.hpp"

namespace reviewforge {

struct ClassStats {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationReport {
  ClassStats human;
  ClassStats machine;
  double macro_f1 = 0.0;  // class-averaged
  double accuracy = 0.0;
  std::size_t total = 0;
  // Confusion counts with machine as the positive class.
  std::size_t true_machine = 0, false_machine = 0, true_human = 0, false_human = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::string> warnings;

  std::string pretty() const;  // fixed-width text table
  std::string csv() const;     // one row per class plus the average
};

// Computes per-class precision/recall/F over predictions of the ensemble.
ClassificationReport evaluate(const BoostedEnsemble& ensemble,
                              const std::vector<FeatureVector>& test);

// Report from already-made ±1 predictions; shared by evaluate and tests.
ClassificationReport report_from_predictions(std::span<const std::int8_t> predicted,
                                             std::span<const std::int8_t> actual);

// Margin scores binned over [-1, 1]. An even bin count puts a bin edge at 0,
// the decision threshold.
struct MarginHistogram {
  int bins = 20;
  std::vector<std::size_t> human;
  std::vector<std::size_t> machine;

  static MarginHistogram build(std::span<const double> human_margins,
                               std::span<const double> machine_margins, int bins = 20);

  double bin_left(int bin) const;
  double bin_right(int bin) const;
  std::string csv() const;  // bin_left,bin_right,count_human,count_machine
};

}  // namespace reviewforge
