#include "reviewforge/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "reviewforge/binio.hpp"
#include "reviewforge/hash.hpp"

namespace reviewforge {

namespace {

constexpr char kMagic[4] = {'R', 'F', 'L', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

std::size_t NgramLM::HistKeyHash::operator()(const HistKey& key) const {
  std::uint64_t h = kFnvOffset;
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(key.ids.data()),
                             key.len * sizeof(std::int32_t)),
            h);
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(&key.len), 1), h);
  return static_cast<std::size_t>(h);
}

NgramLM::HistKey NgramLM::make_key(std::span<const std::int32_t> ids) {
  HistKey key;
  key.len = static_cast<std::uint8_t>(ids.size());
  std::copy(ids.begin(), ids.end(), key.ids.begin());
  return key;
}

const NgramLM::HistInfo* NgramLM::find_history(int k,
                                               std::span<const std::int32_t> history) const {
  const Level& level = levels_[static_cast<size_t>(k)];
  auto it = level.histories.find(make_key(history));
  return it == level.histories.end() ? nullptr : &it->second;
}

NgramLM NgramLM::train(const std::vector<ReviewPair>& train_pairs, Vocabulary vocab,
                       Config config) {
  if (train_pairs.empty()) throw std::invalid_argument("cannot train on an empty corpus");
  if (config.order < 2 || config.order > kMaxOrder)
    throw std::invalid_argument("n-gram order must be in [2, " + std::to_string(kMaxOrder) + "]");
  if (!(config.discount > 0.0 && config.discount < 1.0))
    throw std::invalid_argument("discount must lie strictly between 0 and 1");

  NgramLM lm;
  lm.vocab_ = std::move(vocab);
  lm.config_ = config;
  const int max_hist = config.order - 1;
  const std::int32_t eos = lm.vocab_.eos_id();

  // Raw counts; std::map on the continuation side keeps flattening sorted.
  std::vector<std::unordered_map<HistKey, std::map<std::int32_t, std::uint64_t>, HistKeyHash>>
      counts(static_cast<size_t>(max_hist) + 1);
  for (const auto& pair : train_pairs) {
    std::vector<std::int32_t> seq = lm.vocab_.encode(pair.context.tokens());
    const size_t ctx_len = seq.size();
    auto review_ids = lm.vocab_.encode(pair.review);
    seq.insert(seq.end(), review_ids.begin(), review_ids.end());
    seq.push_back(eos);
    for (size_t p = ctx_len; p < seq.size(); ++p) {
      for (int k = 0; k <= max_hist; ++k) {
        if (p < static_cast<size_t>(k)) break;
        auto hist = std::span<const std::int32_t>(seq).subspan(p - k, static_cast<size_t>(k));
        ++counts[static_cast<size_t>(k)][make_key(hist)][seq[p]];
      }
    }
  }

  // Flatten each level in canonical history order so the in-memory layout
  // (and therefore the saved file) is independent of hash iteration order.
  lm.levels_.resize(static_cast<size_t>(max_hist) + 1);
  for (int k = 0; k <= max_hist; ++k) {
    auto& raw = counts[static_cast<size_t>(k)];
    std::vector<const std::pair<const HistKey, std::map<std::int32_t, std::uint64_t>>*> items;
    items.reserve(raw.size());
    for (const auto& item : raw) items.push_back(&item);
    std::sort(items.begin(), items.end(), [](const auto* a, const auto* b) {
      return std::lexicographical_compare(a->first.ids.begin(), a->first.ids.begin() + a->first.len,
                                          b->first.ids.begin(), b->first.ids.begin() + b->first.len);
    });
    Level& level = lm.levels_[static_cast<size_t>(k)];
    for (const auto* item : items) {
      HistInfo info;
      info.begin = static_cast<std::uint32_t>(level.cont_token.size());
      for (const auto& [token, count] : item->second) {
        level.cont_token.push_back(token);
        level.cont_count.push_back(count);
        info.total += count;
      }
      info.end = static_cast<std::uint32_t>(level.cont_token.size());
      level.histories.emplace(item->first, info);
    }
  }
  return lm;
}

LogProbVector NgramLM::next_token_logprobs(std::span<const std::int32_t> context,
                                           std::span<const std::int32_t> prefix) const {
  std::vector<std::int32_t> full;
  full.reserve(context.size() + prefix.size());
  full.insert(full.end(), context.begin(), context.end());
  full.insert(full.end(), prefix.begin(), prefix.end());

  const size_t alphabet = static_cast<size_t>(vocab_.scored_size());
  LogProbVector out(alphabet, 1.0 / static_cast<double>(alphabet));
  const double discount = config_.discount;
  const int max_hist = std::min<int>(config_.order - 1, static_cast<int>(full.size()));
  for (int k = 0; k <= max_hist; ++k) {
    auto hist = std::span<const std::int32_t>(full).subspan(full.size() - static_cast<size_t>(k));
    const HistInfo* info = find_history(k, hist);
    if (!info || info->total == 0) continue;  // unseen history: pass through
    const double total = static_cast<double>(info->total);
    const double gamma = discount * static_cast<double>(info->end - info->begin) / total;
    for (auto& v : out) v *= gamma;
    const Level& level = levels_[static_cast<size_t>(k)];
    for (std::uint32_t i = info->begin; i < info->end; ++i) {
      out[static_cast<size_t>(level.cont_token[i])] +=
          (static_cast<double>(level.cont_count[i]) - discount) / total;
    }
  }
  for (auto& v : out) v = std::log(v);
  return out;
}

double NgramLM::token_prob(std::span<const std::int32_t> history, std::int32_t token) const {
  const size_t alphabet = static_cast<size_t>(vocab_.scored_size());
  double p = 1.0 / static_cast<double>(alphabet);
  const double discount = config_.discount;
  const int max_hist = std::min<int>(config_.order - 1, static_cast<int>(history.size()));
  for (int k = 0; k <= max_hist; ++k) {
    auto hist = history.subspan(history.size() - static_cast<size_t>(k));
    const HistInfo* info = find_history(k, hist);
    if (!info || info->total == 0) continue;
    const double total = static_cast<double>(info->total);
    const double gamma = discount * static_cast<double>(info->end - info->begin) / total;
    const Level& level = levels_[static_cast<size_t>(k)];
    auto begin = level.cont_token.begin() + info->begin;
    auto end = level.cont_token.begin() + info->end;
    auto it = std::lower_bound(begin, end, token);
    double correction = 0.0;
    if (it != end && *it == token) {
      std::uint64_t count = level.cont_count[static_cast<size_t>(it - level.cont_token.begin())];
      correction = (static_cast<double>(count) - discount) / total;
    }
    p = gamma * p + correction;
  }
  return p;
}

double NgramLM::sequence_logprob(std::span<const std::int32_t> context,
                                 std::span<const std::int32_t> review) const {
  std::vector<std::int32_t> full(context.begin(), context.end());
  full.reserve(context.size() + review.size());
  double total = 0.0;
  for (size_t i = 0; i <= review.size(); ++i) {
    std::int32_t target = i < review.size() ? review[i] : vocab_.eos_id();
    total += std::log(token_prob(full, target));
    if (i < review.size()) full.push_back(review[i]);
  }
  return total;
}

void NgramLM::save(const std::filesystem::path& path) const {
  auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kMagic, 4);
  binio::write_u32(out, kFormatVersion);
  binio::write_u32(out, static_cast<std::uint32_t>(config_.order));
  binio::write_f64(out, config_.discount);
  binio::write_u64(out, vocab_.hash());
  binio::write_u32(out, static_cast<std::uint32_t>(vocab_.scored_size()));
  for (std::int32_t i = 0; i < vocab_.scored_size(); ++i) {
    binio::write_string(out, vocab_.token_of(i));
    binio::write_u64(out, vocab_.count_of(i));
  }
  for (const auto& level : levels_) {
    std::vector<const std::pair<const HistKey, HistInfo>*> items;
    items.reserve(level.histories.size());
    for (const auto& item : level.histories) items.push_back(&item);
    std::sort(items.begin(), items.end(), [](const auto* a, const auto* b) {
      return std::lexicographical_compare(a->first.ids.begin(), a->first.ids.begin() + a->first.len,
                                          b->first.ids.begin(), b->first.ids.begin() + b->first.len);
    });
    binio::write_u64(out, items.size());
    for (const auto* item : items) {
      for (std::uint8_t i = 0; i < item->first.len; ++i) binio::write_i32(out, item->first.ids[i]);
      binio::write_u32(out, item->second.end - item->second.begin);
      for (std::uint32_t i = item->second.begin; i < item->second.end; ++i) {
        binio::write_i32(out, level.cont_token[i]);
        binio::write_u64(out, level.cont_count[i]);
      }
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

NgramLM NgramLM::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path.string() + " is not a language model file");
  std::uint32_t version = binio::read_u32(in);
  if (version != kFormatVersion)
    throw std::runtime_error(path.string() + ": unsupported model version " +
                             std::to_string(version));
  NgramLM lm;
  lm.config_.order = static_cast<int>(binio::read_u32(in));
  lm.config_.discount = binio::read_f64(in);
  std::uint64_t stored_hash = binio::read_u64(in);
  std::uint32_t n_entries = binio::read_u32(in);
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(n_entries);
  for (std::uint32_t i = 0; i < n_entries; ++i) {
    std::string token = binio::read_string(in);
    std::uint64_t count = binio::read_u64(in);
    entries.emplace_back(std::move(token), count);
  }
  lm.vocab_ = Vocabulary::from_entries(std::move(entries));
  if (lm.vocab_.hash() != stored_hash)
    throw std::runtime_error(path.string() + ": embedded vocabulary does not match its hash");

  lm.levels_.resize(static_cast<size_t>(lm.config_.order));
  for (int k = 0; k < lm.config_.order; ++k) {
    Level& level = lm.levels_[static_cast<size_t>(k)];
    std::uint64_t n_hist = binio::read_u64(in);
    for (std::uint64_t h = 0; h < n_hist; ++h) {
      HistKey key;
      key.len = static_cast<std::uint8_t>(k);
      for (int i = 0; i < k; ++i) key.ids[static_cast<size_t>(i)] = binio::read_i32(in);
      HistInfo info;
      info.begin = static_cast<std::uint32_t>(level.cont_token.size());
      std::uint32_t n_cont = binio::read_u32(in);
      for (std::uint32_t i = 0; i < n_cont; ++i) {
        level.cont_token.push_back(binio::read_i32(in));
        std::uint64_t count = binio::read_u64(in);
        level.cont_count.push_back(count);
        info.total += count;
      }
      info.end = static_cast<std::uint32_t>(level.cont_token.size());
      level.histories.emplace(key, info);
    }
  }
  return lm;
}

}  // namespace reviewforge
