#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "reviewforge/text.hpp"

namespace reviewforge {

enum class Label : std::int8_t { kHuman = -1, kMachine = 1 };

inline std::int8_t label_sign(Label label) { return static_cast<std::int8_t>(label); }

struct FeatureConfig {
  bool readability = true;
  bool pos_ngrams = true;
  bool word_unigrams = true;
  bool char_ngrams = true;
  int pos_max_n = 4;   // POS n-grams for n = 1..pos_max_n
  int char_max_n = 3;  // character n-grams for n = 1..char_max_n
};

// Sparse feature values; entries sorted by index with no duplicates.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
  Label label = Label::kHuman;
  std::uint64_t space_hash = 0;

  double value_at(std::uint32_t index) const;
  void set(std::uint32_t index, double value);  // keeps entries sorted
};

// Index assignment for all feature groups, fitted on training documents
// only. Layout: readability block first (when enabled), then POS n-grams,
// word unigrams, and character n-grams, each in lexicographic key order so
// the assignment is reproducible. Extraction never grows the space: n-grams
// unseen at fit time are dropped.
class FeatureSpace {
 public:
  FeatureSpace() = default;

  static FeatureSpace fit(const std::vector<TokenSequence>& train_docs,
                          FeatureConfig config = {});

  FeatureVector extract(const TokenSequence& review) const;
  std::vector<FeatureVector> extract_batch(const std::vector<TokenSequence>& docs, Label label,
                                           unsigned jobs = 1) const;

  std::size_t dimension() const { return dimension_; }
  const FeatureConfig& config() const { return config_; }
  std::size_t group_size(const char* group) const;  // "pos", "word", "char"

  // Human-readable name, e.g. "readability:smog", "pos3:DET ADJ NOUN",
  // "word:pizza", "char:the".
  std::string feature_name(std::uint32_t index) const;

  // FNV-1a over the configuration and every key in index order; stamps
  // extracted vectors and persisted detectors. Cached at fit/load time.
  std::uint64_t hash() const { return hash_; }

  void write(std::ostream& out) const;
  static FeatureSpace read(std::istream& in);

 private:
  FeatureConfig config_;
  std::map<std::string, std::uint32_t> pos_index_;
  std::map<std::string, std::uint32_t> word_index_;
  std::map<std::string, std::uint32_t> char_index_;
  std::size_t dimension_ = 0;
  std::uint64_t hash_ = 0;

  std::size_t readability_count() const;
  void assign_indices();
  std::uint64_t compute_hash() const;
};

}  // namespace reviewforge
