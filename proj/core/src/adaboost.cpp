#include "reviewforge/adaboost.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "reviewforge/binio.hpp"

namespace reviewforge {

namespace {

constexpr double kEpsilonFloor = 1e-10;

// Column-oriented view of the training set so each boosting round can scan
// candidate splits in O(nonzeros + features) per node.
class TreeTrainer {
 public:
  TreeTrainer(const std::vector<FeatureVector>& data, int dimension)
      : data_(data), labels_(data.size()), columns_(static_cast<size_t>(dimension)) {
    for (std::uint32_t doc = 0; doc < data.size(); ++doc) {
      labels_[doc] = label_sign(data[doc].label);
      for (const auto& [index, value] : data[doc].entries) {
        if (value != 0.0) columns_[index].push_back({value, doc});
      }
    }
    for (auto& column : columns_) {
      std::sort(column.begin(), column.end(), [](const Entry& a, const Entry& b) {
        return a.value != b.value ? a.value < b.value : a.doc < b.doc;
      });
    }
    mark_.assign(data.size(), 0);
  }

  DecisionTree fit(const std::vector<double>& weights, int max_depth) {
    DecisionTree tree;
    std::vector<std::uint32_t> all(data_.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(tree, all, weights, 0, max_depth);
    return tree;
  }

 private:
  struct Entry {
    double value;
    std::uint32_t doc;
  };
  struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double gini = std::numeric_limits<double>::infinity();
  };

  const std::vector<FeatureVector>& data_;
  std::vector<std::int8_t> labels_;
  std::vector<std::vector<Entry>> columns_;
  std::vector<std::uint32_t> mark_;  // doc -> stamp of the node being split
  std::uint32_t stamp_ = 0;

  // total * (1 - p^2 - q^2) rewritten as 2*pos*neg/(pos+neg): symmetric in
  // pos/neg, so mirror-image partitions of exactly representable weights
  // produce bit-identical terms and the tie rule can actually fire.
  static double gini_term(double pos, double neg) {
    const double total = pos + neg;
    if (total <= 0.0) return 0.0;
    return 2.0 * pos * neg / total;
  }

  std::int32_t grow(DecisionTree& tree, const std::vector<std::uint32_t>& docs,
                    const std::vector<double>& weights, int depth, int max_depth) {
    double pos = 0.0, neg = 0.0;
    for (std::uint32_t doc : docs) (labels_[doc] > 0 ? pos : neg) += weights[doc];

    const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    auto make_leaf = [&] {
      tree.nodes[static_cast<size_t>(node_id)].leaf = pos > neg ? 1 : -1;  // tie -> human
      return node_id;
    };
    if (depth >= max_depth || pos == 0.0 || neg == 0.0) return make_leaf();

    Split best = find_split(docs, weights, pos, neg);
    if (best.feature < 0) return make_leaf();

    std::vector<std::uint32_t> left_docs, right_docs;
    left_docs.reserve(docs.size());
    right_docs.reserve(docs.size());
    for (std::uint32_t doc : docs) {
      const double v = data_[doc].value_at(static_cast<std::uint32_t>(best.feature));
      (v <= best.threshold ? left_docs : right_docs).push_back(doc);
    }
    if (left_docs.empty() || right_docs.empty()) return make_leaf();

    tree.nodes[static_cast<size_t>(node_id)].feature = best.feature;
    tree.nodes[static_cast<size_t>(node_id)].threshold = best.threshold;
    const std::int32_t left = grow(tree, left_docs, weights, depth + 1, max_depth);
    tree.nodes[static_cast<size_t>(node_id)].left = left;
    const std::int32_t right = grow(tree, right_docs, weights, depth + 1, max_depth);
    tree.nodes[static_cast<size_t>(node_id)].right = right;
    return node_id;
  }

  Split find_split(const std::vector<std::uint32_t>& docs, const std::vector<double>& weights,
                   double total_pos, double total_neg) {
    ++stamp_;
    for (std::uint32_t doc : docs) mark_[doc] = stamp_;

    Split best;
    // (value, pos-weight, neg-weight) groups in ascending value order,
    // rebuilt per feature. Nonzero entries come from the sorted column; the
    // docs whose value is 0 form one implicit group.
    std::vector<std::array<double, 3>> groups;
    for (std::uint32_t f = 0; f < columns_.size(); ++f) {
      const auto& column = columns_[f];
      groups.clear();
      double seen_pos = 0.0, seen_neg = 0.0;
      bool zero_inserted = false;
      auto push_group = [&](double value, double pos, double neg) {
        if (!groups.empty() && groups.back()[0] == value) {
          groups.back()[1] += pos;
          groups.back()[2] += neg;
        } else {
          groups.push_back({value, pos, neg});
        }
      };
      for (const Entry& entry : column) {
        if (mark_[entry.doc] != stamp_) continue;
        if (!zero_inserted && entry.value > 0.0) {
          groups.push_back({0.0, 0.0, 0.0});  // placeholder, filled below
          zero_inserted = true;
        }
        const double w = weights[entry.doc];
        if (labels_[entry.doc] > 0) {
          push_group(entry.value, w, 0.0);
          seen_pos += w;
        } else {
          push_group(entry.value, 0.0, w);
          seen_neg += w;
        }
      }
      if (!zero_inserted) groups.push_back({0.0, 0.0, 0.0});
      // Fill the zero group with whatever weight the column did not cover.
      const double zero_pos = total_pos - seen_pos;
      const double zero_neg = total_neg - seen_neg;
      for (auto& g : groups) {
        if (g[0] == 0.0) {
          g[1] += zero_pos;
          g[2] += zero_neg;
          break;
        }
      }
      // Drop empty groups (a zero group may have no weight at all).
      groups.erase(std::remove_if(groups.begin(), groups.end(),
                                  [](const std::array<double, 3>& g) {
                                    return g[1] == 0.0 && g[2] == 0.0;
                                  }),
                   groups.end());
      if (groups.size() < 2) continue;

      double left_pos = 0.0, left_neg = 0.0;
      for (size_t g = 0; g + 1 < groups.size(); ++g) {
        left_pos += groups[g][1];
        left_neg += groups[g][2];
        const double right_pos = total_pos - left_pos;
        const double right_neg = total_neg - left_neg;
        const double gini = gini_term(left_pos, left_neg) + gini_term(right_pos, right_neg);
        if (gini < best.gini) {
          best.gini = gini;
          best.feature = static_cast<std::int32_t>(f);
          best.threshold = (groups[g][0] + groups[g + 1][0]) / 2.0;
        }
      }
    }
    return best;
  }
};

}  // namespace

std::int8_t DecisionTree::predict(const FeatureVector& fv) const {
  std::int32_t node = 0;
  while (true) {
    const TreeNode& n = nodes[static_cast<size_t>(node)];
    if (n.feature < 0) return n.leaf;
    node = fv.value_at(static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right;
  }
}

DecisionTree fit_tree(const std::vector<FeatureVector>& data, const std::vector<double>& weights,
                      int max_depth) {
  if (data.empty()) throw std::invalid_argument("cannot fit a tree on no data");
  if (weights.size() != data.size())
    throw std::invalid_argument("weights and data sizes differ");
  std::uint32_t dim = 0;
  for (const auto& fv : data)
    for (const auto& [index, value] : fv.entries) dim = std::max(dim, index + 1);
  TreeTrainer trainer(data, static_cast<int>(dim));
  return trainer.fit(weights, max_depth);
}

BoostedEnsemble BoostedEnsemble::train(const std::vector<FeatureVector>& data,
                                       BoostOptions options) {
  if (data.size() < 2) throw std::invalid_argument("boosting needs at least two examples");
  if (options.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (options.max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  bool has_pos = false, has_neg = false;
  for (const auto& fv : data) {
    (label_sign(fv.label) > 0 ? has_pos : has_neg) = true;
    if (fv.space_hash != data.front().space_hash)
      throw std::invalid_argument("training vectors come from different feature spaces");
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("boosting needs both classes in the training data");

  BoostedEnsemble ensemble;
  ensemble.options_ = options;
  ensemble.space_hash_ = data.front().space_hash;

  std::uint32_t dim = 0;
  for (const auto& fv : data)
    for (const auto& [index, value] : fv.entries) dim = std::max(dim, index + 1);
  TreeTrainer trainer(data, static_cast<int>(dim));

  const size_t n = data.size();
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  std::vector<std::int8_t> predictions(n);
  for (int round = 0; round < options.rounds; ++round) {
    DecisionTree tree = trainer.fit(weights, options.max_depth);
    double epsilon = 0.0;
    for (size_t i = 0; i < n; ++i) {
      predictions[i] = tree.predict(data[i]);
      if (predictions[i] != label_sign(data[i].label)) epsilon += weights[i];
    }
    if (epsilon >= 0.5) break;  // no better than chance: discard and stop
    if (epsilon <= 0.0) {
      const double alpha = 0.5 * std::log((1.0 - kEpsilonFloor) / kEpsilonFloor);
      ensemble.stages_.push_back({std::move(tree), alpha, 0.0});
      break;  // perfect round: keep it, nothing left to reweight
    }
    const double alpha = 0.5 * std::log((1.0 - epsilon) / epsilon);
    ensemble.stages_.push_back({std::move(tree), alpha, epsilon});
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const int agree = predictions[i] == label_sign(data[i].label) ? 1 : -1;
      weights[i] *= std::exp(-alpha * agree);
      sum += weights[i];
    }
    for (auto& w : weights) w /= sum;
  }
  return ensemble;
}

double BoostedEnsemble::margin(const FeatureVector& fv) const {
  double vote = 0.0;
  double total = 0.0;
  for (const auto& stage : stages_) {
    vote += stage.alpha * static_cast<double>(stage.tree.predict(fv));
    total += stage.alpha;
  }
  return total > 0.0 ? vote / total : 0.0;
}

Label BoostedEnsemble::classify(const FeatureVector& fv) const {
  if (fv.space_hash != space_hash_)
    throw std::runtime_error("feature vector does not match the ensemble's feature space");
  return margin(fv) > 0.0 ? Label::kMachine : Label::kHuman;
}

std::vector<double> BoostedEnsemble::loss_bounds() const {
  std::vector<double> bounds;
  bounds.reserve(stages_.size());
  double product = 1.0;
  for (const auto& stage : stages_) {
    product *= 2.0 * std::sqrt(stage.epsilon * (1.0 - stage.epsilon));
    bounds.push_back(product);
  }
  return bounds;
}

void BoostedEnsemble::write(std::ostream& out) const {
  binio::write_u32(out, static_cast<std::uint32_t>(options_.rounds));
  binio::write_u32(out, static_cast<std::uint32_t>(options_.max_depth));
  binio::write_u64(out, options_.seed);
  binio::write_u64(out, space_hash_);
  binio::write_u32(out, static_cast<std::uint32_t>(stages_.size()));
  for (const auto& stage : stages_) {
    binio::write_f64(out, stage.alpha);
    binio::write_f64(out, stage.epsilon);
    binio::write_u32(out, static_cast<std::uint32_t>(stage.tree.nodes.size()));
    for (const auto& node : stage.tree.nodes) {
      binio::write_i32(out, node.feature);
      binio::write_f64(out, node.threshold);
      binio::write_i32(out, node.left);
      binio::write_i32(out, node.right);
      binio::write_u8(out, static_cast<std::uint8_t>(node.leaf));
    }
  }
}

BoostedEnsemble BoostedEnsemble::read(std::istream& in) {
  BoostedEnsemble ensemble;
  ensemble.options_.rounds = static_cast<int>(binio::read_u32(in));
  ensemble.options_.max_depth = static_cast<int>(binio::read_u32(in));
  ensemble.options_.seed = binio::read_u64(in);
  ensemble.space_hash_ = binio::read_u64(in);
  const std::uint32_t n_stages = binio::read_u32(in);
  ensemble.stages_.resize(n_stages);
  for (auto& stage : ensemble.stages_) {
    stage.alpha = binio::read_f64(in);
    stage.epsilon = binio::read_f64(in);
    const std::uint32_t n_nodes = binio::read_u32(in);
    stage.tree.nodes.resize(n_nodes);
    for (auto& node : stage.tree.nodes) {
      node.feature = binio::read_i32(in);
      node.threshold = binio::read_f64(in);
      node.left = binio::read_i32(in);
      node.right = binio::read_i32(in);
      node.leaf = static_cast<std::int8_t>(binio::read_u8(in));
    }
  }
  return ensemble;
}

namespace {
constexpr char kDetectorMagic[4] = {'R', 'F', 'D', 'T'};
constexpr std::uint32_t kDetectorVersion = 1;
}  // namespace

Label DetectorModel::classify(const TokenSequence& review, double* margin_out) const {
  FeatureVector fv = space.extract(review);
  if (margin_out) *margin_out = ensemble.margin(fv);
  return ensemble.classify(fv);
}

void DetectorModel::save(const std::filesystem::path& path) const {
  auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kDetectorMagic, 4);
  binio::write_u32(out, kDetectorVersion);
  binio::write_u64(out, space.hash());
  space.write(out);
  ensemble.write(out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

DetectorModel DetectorModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kDetectorMagic, 4) != 0)
    throw std::runtime_error(path.string() + " is not a detector model file");
  const std::uint32_t version = binio::read_u32(in);
  if (version != kDetectorVersion)
    throw std::runtime_error(path.string() + ": unsupported detector version " +
                             std::to_string(version));
  DetectorModel model;
  const std::uint64_t stored_hash = binio::read_u64(in);
  model.space = FeatureSpace::read(in);
  if (model.space.hash() != stored_hash)
    throw std::runtime_error(path.string() + ": feature space does not match its hash");
  model.ensemble = BoostedEnsemble::read(in);
  if (model.ensemble.space_hash() != model.space.hash())
    throw std::runtime_error(path.string() + ": ensemble was trained on a different space");
  return model;
}

}  // namespace reviewforge
