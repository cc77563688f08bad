#include "reviewforge/features.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "reviewforge/binio.hpp"
#include "reviewforge/hash.hpp"
#include "reviewforge/parallel.hpp"
#include "reviewforge/pos_tagger.hpp"
#include "reviewforge/readability.hpp"

namespace reviewforge {

namespace {

std::string pos_ngram_key(const std::vector<PosTag>& tags, std::size_t start, int n) {
  std::string key;
  for (int i = 0; i < n; ++i) {
    if (i > 0) key.push_back(' ');
    key.append(pos_tag_name(tags[start + static_cast<std::size_t>(i)]));
  }
  return key;
}

template <typename Fn>
void for_each_pos_ngram(const TokenSequence& doc, int max_n, Fn&& fn) {
  std::vector<PosTag> tags = pos_tag(doc);
  for (int n = 1; n <= max_n; ++n) {
    if (tags.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t start = 0; start + static_cast<std::size_t>(n) <= tags.size(); ++start)
      fn(n, pos_ngram_key(tags, start, n));
  }
}

template <typename Fn>
void for_each_char_ngram(const TokenSequence& doc, int max_n, Fn&& fn) {
  std::string text = detokenize(doc);
  for (int n = 1; n <= max_n; ++n) {
    if (text.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t start = 0; start + static_cast<std::size_t>(n) <= text.size(); ++start)
      fn(n, text.substr(start, static_cast<std::size_t>(n)));
  }
}

}  // namespace

double FeatureVector::value_at(std::uint32_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& entry, std::uint32_t idx) { return entry.first < idx; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

void FeatureVector::set(std::uint32_t index, double value) {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& entry, std::uint32_t idx) { return entry.first < idx; });
  if (it != entries.end() && it->first == index) {
    it->second = value;
  } else {
    entries.insert(it, {index, value});
  }
}

std::size_t FeatureSpace::readability_count() const {
  return config_.readability ? kReadabilityCount : 0;
}

void FeatureSpace::assign_indices() {
  std::uint32_t next = static_cast<std::uint32_t>(readability_count());
  for (auto& [key, index] : pos_index_) index = next++;
  for (auto& [key, index] : word_index_) index = next++;
  for (auto& [key, index] : char_index_) index = next++;
  dimension_ = next;
  hash_ = compute_hash();
}

FeatureSpace FeatureSpace::fit(const std::vector<TokenSequence>& train_docs,
                               FeatureConfig config) {
  if (config.pos_max_n < 1 || config.pos_max_n > 8 || config.char_max_n < 1 ||
      config.char_max_n > 8)
    throw std::invalid_argument("n-gram sizes must be in [1, 8]");
  FeatureSpace space;
  space.config_ = config;
  for (const auto& doc : train_docs) {
    if (config.pos_ngrams)
      for_each_pos_ngram(doc, config.pos_max_n,
                         [&](int, const std::string& key) { space.pos_index_.emplace(key, 0); });
    if (config.word_unigrams)
      for (const auto& token : doc) space.word_index_.emplace(token, 0);
    if (config.char_ngrams)
      for_each_char_ngram(doc, config.char_max_n,
                          [&](int, const std::string& key) { space.char_index_.emplace(key, 0); });
  }
  space.assign_indices();
  return space;
}

FeatureVector FeatureSpace::extract(const TokenSequence& review) const {
  std::map<std::uint32_t, double> values;
  if (config_.readability) {
    bool has_word = std::any_of(review.begin(), review.end(),
                                [](const std::string& t) { return is_word_token(t); });
    if (has_word) {
      auto scores = readability_scores(review);
      for (std::size_t i = 0; i < scores.size(); ++i)
        values[static_cast<std::uint32_t>(i)] = scores[i];
    }
  }
  if (config_.pos_ngrams) {
    for_each_pos_ngram(review, config_.pos_max_n, [&](int, const std::string& key) {
      auto it = pos_index_.find(key);
      if (it != pos_index_.end()) values[it->second] += 1.0;
    });
  }
  if (config_.word_unigrams) {
    for (const auto& token : review) {
      auto it = word_index_.find(token);
      if (it != word_index_.end()) values[it->second] += 1.0;
    }
  }
  if (config_.char_ngrams) {
    for_each_char_ngram(review, config_.char_max_n, [&](int, const std::string& key) {
      auto it = char_index_.find(key);
      if (it != char_index_.end()) values[it->second] += 1.0;
    });
  }
  FeatureVector fv;
  fv.space_hash = hash();
  fv.entries.reserve(values.size());
  for (const auto& [index, value] : values) {
    if (value != 0.0) fv.entries.emplace_back(index, value);
  }
  return fv;
}

std::vector<FeatureVector> FeatureSpace::extract_batch(const std::vector<TokenSequence>& docs,
                                                       Label label, unsigned jobs) const {
  std::vector<FeatureVector> out(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t i) {
    out[i] = extract(docs[i]);
    out[i].label = label;
  });
  return out;
}

std::size_t FeatureSpace::group_size(const char* group) const {
  std::string_view g(group);
  if (g == "pos") return pos_index_.size();
  if (g == "word") return word_index_.size();
  if (g == "char") return char_index_.size();
  if (g == "readability") return readability_count();
  throw std::invalid_argument("unknown feature group: " + std::string(g));
}

std::string FeatureSpace::feature_name(std::uint32_t index) const {
  if (index < readability_count())
    return "readability:" + std::string(readability_name(index));
  for (const auto& [key, idx] : pos_index_)
    if (idx == index)
      return "pos" + std::to_string(std::count(key.begin(), key.end(), ' ') + 1) + ":" + key;
  for (const auto& [key, idx] : word_index_)
    if (idx == index) return "word:" + key;
  for (const auto& [key, idx] : char_index_)
    if (idx == index) return "char:" + key;
  throw std::out_of_range("feature index out of range");
}

std::uint64_t FeatureSpace::compute_hash() const {
  std::uint64_t h = kFnvOffset;
  auto mix_flag = [&](bool flag) { h = fnv1a(flag ? "1" : "0", h); };
  mix_flag(config_.readability);
  mix_flag(config_.pos_ngrams);
  mix_flag(config_.word_unigrams);
  mix_flag(config_.char_ngrams);
  h = fnv1a(std::to_string(config_.pos_max_n), h);
  h = fnv1a(std::to_string(config_.char_max_n), h);
  auto mix_group = [&](const std::map<std::string, std::uint32_t>& group, const char* name) {
    h = fnv1a(name, h);
    for (const auto& [key, index] : group) {
      h = fnv1a(key, h);
      h = fnv1a("\x1f", h);
    }
  };
  mix_group(pos_index_, "pos");
  mix_group(word_index_, "word");
  mix_group(char_index_, "char");
  return h;
}

void FeatureSpace::write(std::ostream& out) const {
  binio::write_u8(out, config_.readability ? 1 : 0);
  binio::write_u8(out, config_.pos_ngrams ? 1 : 0);
  binio::write_u8(out, config_.word_unigrams ? 1 : 0);
  binio::write_u8(out, config_.char_ngrams ? 1 : 0);
  binio::write_u32(out, static_cast<std::uint32_t>(config_.pos_max_n));
  binio::write_u32(out, static_cast<std::uint32_t>(config_.char_max_n));
  auto write_group = [&](const std::map<std::string, std::uint32_t>& group) {
    binio::write_u64(out, group.size());
    for (const auto& [key, index] : group) binio::write_string(out, key);
  };
  write_group(pos_index_);
  write_group(word_index_);
  write_group(char_index_);
}

FeatureSpace FeatureSpace::read(std::istream& in) {
  FeatureSpace space;
  space.config_.readability = binio::read_u8(in) != 0;
  space.config_.pos_ngrams = binio::read_u8(in) != 0;
  space.config_.word_unigrams = binio::read_u8(in) != 0;
  space.config_.char_ngrams = binio::read_u8(in) != 0;
  space.config_.pos_max_n = static_cast<int>(binio::read_u32(in));
  space.config_.char_max_n = static_cast<int>(binio::read_u32(in));
  auto read_group = [&](std::map<std::string, std::uint32_t>& group) {
    std::uint64_t n = binio::read_u64(in);
    for (std::uint64_t i = 0; i < n; ++i) group.emplace(binio::read_string(in), 0);
  };
  read_group(space.pos_index_);
  read_group(space.word_index_);
  read_group(space.char_index_);
  space.assign_indices();
  return space;
}

}  // namespace reviewforge
