#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "reviewforge/features.hpp"

namespace reviewforge {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // value <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int8_t leaf = 0;  // +1 machine / -1 human, valid when feature == -1
};

// Depth-limited CART-style tree over sparse vectors; absent features read
// as 0. Splits minimize weighted Gini impurity, searched exhaustively over
// every threshold between distinct observed values. Ties keep the lowest
// feature index, then the lowest threshold; tied leaves vote human.
struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::int8_t predict(const FeatureVector& fv) const;
};

DecisionTree fit_tree(const std::vector<FeatureVector>& data, const std::vector<double>& weights,
                      int max_depth);

struct BoostOptions {
  int rounds = 200;
  int max_depth = 2;
  std::uint64_t seed = 0;  // recorded in metadata; fitting itself is deterministic
};

struct BoostStage {
  DecisionTree tree;
  double alpha = 0.0;
  double epsilon = 0.0;  // weighted training error of this round
};

// Discrete AdaBoost over depth-limited trees. A round with weighted error
// >= 0.5 is discarded and training stops; a perfect round keeps the tree
// with its stage weight capped at 0.5*ln((1-1e-10)/1e-10) and stops.
class BoostedEnsemble {
 public:
  BoostedEnsemble() = default;

  static BoostedEnsemble train(const std::vector<FeatureVector>& data,
                               BoostOptions options = {});

  // Normalized weighted vote in [-1, 1]; positive means machine.
  double margin(const FeatureVector& fv) const;
  // Ties (margin exactly 0) resolve to human. Throws when the vector's
  // feature-space hash does not match the ensemble's.
  Label classify(const FeatureVector& fv) const;

  const std::vector<BoostStage>& stages() const { return stages_; }
  const BoostOptions& options() const { return options_; }
  std::uint64_t space_hash() const { return space_hash_; }

  // Upper bound on training 0-1 error after each kept round:
  // prod_t 2*sqrt(eps_t*(1-eps_t)).
  std::vector<double> loss_bounds() const;

  void write(std::ostream& out) const;
  static BoostedEnsemble read(std::istream& in);

 private:
  std::vector<BoostStage> stages_;
  BoostOptions options_;
  std::uint64_t space_hash_ = 0;
};

// Feature space and ensemble persisted together; classify() runs the full
// extract-then-vote path.
struct DetectorModel {
  FeatureSpace space;
  BoostedEnsemble ensemble;

  Label classify(const TokenSequence& review, double* margin_out = nullptr) const;

  void save(const std::filesystem::path& path) const;
  static DetectorModel load(const std::filesystem::path& path);
};

}  // namespace reviewforge
