#include "reviewforge/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "reviewforge/hash.hpp"

namespace reviewforge {

namespace {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

// Text fields may contain commas (punctuation tokens), so always quote them.
std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::uint64_t hash_fields(const std::vector<std::string>& fields) {
  std::uint64_t h = kFnvOffset;
  for (const auto& f : fields) {
    h = fnv1a(f, h);
    h = fnv1a("\x1f", h);
  }
  return h;
}

}  // namespace

std::vector<SweepCell> default_sweep_grid() {
  return {{0.3, -3.0}, {0.3, -5.0}, {0.5, -4.0}, {0.7, -3.0}, {0.7, -5.0}, {0.9, -4.0}};
}

CellDiversity diversity_stats(const std::vector<TokenSequence>& reviews, std::string label) {
  CellDiversity out;
  out.label = std::move(label);
  out.sample_size = reviews.size();
  if (reviews.empty()) return out;

  std::map<std::string, std::size_t> openers;
  std::map<std::string, std::size_t> unigrams;
  std::map<std::string, std::size_t> bigrams;
  std::size_t total_tokens = 0;
  std::size_t total_bigrams = 0;
  for (const auto& review : reviews) {
    std::string opener;
    for (std::size_t i = 0; i < review.size() && i < 2; ++i) {
      if (i > 0) opener += ' ';
      opener += review[i];
    }
    ++openers[opener];
    total_tokens += review.size();
    for (const auto& token : review) ++unigrams[token];
    for (std::size_t i = 0; i + 1 < review.size(); ++i) {
      ++bigrams[review[i] + " " + review[i + 1]];
      ++total_bigrams;
    }
  }

  out.distinct_opening_bigrams = openers.size();
  std::size_t best = 0;
  for (const auto& [opener, count] : openers) {
    if (count > best) {
      best = count;
      out.top_opening_bigram = opener;
    }
  }
  out.max_opening_bigram_share = static_cast<double>(best) / reviews.size();
  if (total_tokens > 0)
    out.distinct_unigram_ratio = static_cast<double>(unigrams.size()) / total_tokens;
  if (total_bigrams > 0)
    out.distinct_bigram_ratio = static_cast<double>(bigrams.size()) / total_bigrams;
  out.mean_length = static_cast<double>(total_tokens) / reviews.size();
  return out;
}

std::string DiversityReport::csv() const {
  std::string out =
      "label,b,lambda,sample_size,distinct_opening_bigrams,max_opening_bigram_share,"
      "top_opening_bigram,distinct_1,distinct_2,mean_length\n";
  for (const auto& cell : cells) {
    out += csv_quote(cell.label) + ',' + format_double(cell.b) + ',' +
           format_double(cell.lambda) + ',' + std::to_string(cell.sample_size) + ',' +
           std::to_string(cell.distinct_opening_bigrams) + ',' +
           format_fixed(cell.max_opening_bigram_share) + ',' +
           csv_quote(cell.top_opening_bigram) + ',' + format_fixed(cell.distinct_unigram_ratio) +
           ',' + format_fixed(cell.distinct_bigram_ratio) + ',' + format_fixed(cell.mean_length) +
           '\n';
  }
  return out;
}

std::string DiversityReport::pretty() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-20s %6s %9s %8s %9s %7s %7s %7s  %s\n", "cell", "n",
                "openers", "maxshare", "dist-1", "dist-2", "meanlen", "", "top opener");
  out += buf;
  for (const auto& cell : cells) {
    std::snprintf(buf, sizeof(buf), "%-20s %6zu %9zu %8.3f %9.3f %7.3f %7.1f %7s  \"%s\"\n",
                  cell.label.c_str(), cell.sample_size, cell.distinct_opening_bigrams,
                  cell.max_opening_bigram_share, cell.distinct_unigram_ratio,
                  cell.distinct_bigram_ratio, cell.mean_length, "",
                  cell.top_opening_bigram.c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "config hash: %s\n", hex64(config_hash).c_str());
  out += buf;
  return out;
}

SweepResult run_sweep(const LanguageModel& lm, const std::vector<Context>& contexts,
                      const SweepConfig& config, const GrammarSet& grammar) {
  std::vector<SweepCell> all_cells;
  all_cells.push_back({0.0, 0.0});  // unpenalized greedy baseline
  all_cells.insert(all_cells.end(), config.cells.begin(), config.cells.end());

  SweepResult result;
  std::vector<std::string> hash_fields_list = {"sweep", std::to_string(config.reviews_per_cell),
                                               std::to_string(config.seed)};

  for (std::size_t c = 0; c < all_cells.size(); ++c) {
    GenerationParams params = config.base;
    params.b = all_cells[c].b;
    params.lambda = all_cells[c].lambda;
    params.seed = mix64(config.seed ^ mix64(c + 1));
    params.validate();

    std::vector<Context> cell_contexts;
    if (!contexts.empty()) {
      cell_contexts.reserve(config.reviews_per_cell);
      for (std::size_t i = 0; i < config.reviews_per_cell; ++i)
        cell_contexts.push_back(contexts[i % contexts.size()]);
    }

    auto generated = generate_batch(lm, cell_contexts, params, grammar, config.jobs);
    std::vector<TokenSequence> reviews;
    reviews.reserve(generated.size());
    for (auto& g : generated) reviews.push_back(std::move(g.tokens));

    std::string label;
    if (c == 0) {
      label = "greedy";
    } else {
      label = "b=" + format_double(params.b) + " lambda=" + format_double(params.lambda);
    }
    CellDiversity stats = diversity_stats(reviews, label);
    stats.b = params.b;
    stats.lambda = params.lambda;
    result.report.cells.push_back(std::move(stats));
    result.reviews.push_back(std::move(reviews));

    hash_fields_list.push_back(format_double(params.b));
    hash_fields_list.push_back(format_double(params.lambda));
  }
  hash_fields_list.push_back(format_double(config.base.alpha));
  hash_fields_list.push_back(std::to_string(config.base.min_len));
  hash_fields_list.push_back(std::to_string(config.base.max_len));
  result.report.config_hash = hash_fields(hash_fields_list);
  return result;
}

CorpusSplit split_for_experiment(const std::vector<TokenSequence>& docs, double test_fraction,
                                 Rng rng) {
  if (test_fraction < 0.0 || test_fraction > 1.0)
    throw std::invalid_argument("test_fraction must be in [0, 1]");
  CorpusSplit split;
  const std::size_t n = docs.size();
  if (n < 2) {
    split.train = docs;
    return split;
  }
  auto n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(n) + 0.5);
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  shuffle(order, rng);
  split.test.reserve(n_test);
  split.train.reserve(n - n_test);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_test)
      split.test.push_back(docs[order[i]]);
    else
      split.train.push_back(docs[order[i]]);
  }
  return split;
}

namespace {

std::uint64_t experiment_hash(const FeatureConfig& features, const BoostOptions& boost,
                              std::uint64_t seed, double test_fraction, std::size_t n_human,
                              std::size_t n_machine) {
  return hash_fields({"detector", std::to_string(features.readability),
                      std::to_string(features.pos_ngrams), std::to_string(features.word_unigrams),
                      std::to_string(features.char_ngrams), std::to_string(features.pos_max_n),
                      std::to_string(features.char_max_n), std::to_string(boost.rounds),
                      std::to_string(boost.max_depth), std::to_string(seed),
                      format_double(test_fraction), std::to_string(n_human),
                      std::to_string(n_machine)});
}

std::vector<FeatureVector> labeled_vectors(const FeatureSpace& space,
                                           const std::vector<TokenSequence>& human,
                                           const std::vector<TokenSequence>& machine,
                                           unsigned jobs) {
  auto vectors = space.extract_batch(human, Label::kHuman, jobs);
  auto machine_vectors = space.extract_batch(machine, Label::kMachine, jobs);
  vectors.insert(vectors.end(), std::make_move_iterator(machine_vectors.begin()),
                 std::make_move_iterator(machine_vectors.end()));
  return vectors;
}

}  // namespace

DetectorExperimentResult detector_experiment(const std::vector<TokenSequence>& human,
                                             const std::vector<TokenSequence>& machine,
                                             const DetectorExperimentOptions& options) {
  if (human.size() < options.min_per_class || machine.size() < options.min_per_class)
    throw std::invalid_argument("corpus smaller than the configured per-class minimum (" +
                                std::to_string(options.min_per_class) + ")");

  auto human_split = split_for_experiment(human, options.test_fraction,
                                          derive_rng(options.split_seed, 0));
  auto machine_split = split_for_experiment(machine, options.test_fraction,
                                            derive_rng(options.split_seed, 1));

  std::vector<TokenSequence> train_docs = human_split.train;
  train_docs.insert(train_docs.end(), machine_split.train.begin(), machine_split.train.end());
  FeatureSpace space = FeatureSpace::fit(train_docs, options.features);

  auto train_vectors =
      labeled_vectors(space, human_split.train, machine_split.train, options.jobs);
  BoostedEnsemble ensemble = BoostedEnsemble::train(train_vectors, options.boost);

  auto test_vectors = labeled_vectors(space, human_split.test, machine_split.test, options.jobs);

  DetectorExperimentResult result;
  result.report = evaluate(ensemble, test_vectors);
  result.report.config_hash =
      experiment_hash(options.features, options.boost, options.split_seed,
                      options.test_fraction, human.size(), machine.size());
  const double larger = static_cast<double>(std::max(human.size(), machine.size()));
  const double smaller = static_cast<double>(std::min(human.size(), machine.size()));
  if (larger / smaller > options.imbalance_warn_ratio) {
    result.report.warnings.push_back(
        "class imbalance: " + std::to_string(human.size()) + " human vs " +
        std::to_string(machine.size()) + " machine reviews");
  }

  std::vector<double> human_margins, machine_margins;
  for (const auto& fv : test_vectors) {
    const double m = ensemble.margin(fv);
    if (fv.label == Label::kHuman)
      human_margins.push_back(m);
    else
      machine_margins.push_back(m);
  }
  result.histogram = MarginHistogram::build(human_margins, machine_margins,
                                            options.histogram_bins);

  result.detector.space = std::move(space);
  result.detector.ensemble = std::move(ensemble);
  return result;
}

std::string TransferMatrix::csv() const {
  std::string out = "train_category,eval_category,macro_f1,machine_recall\n";
  for (std::size_t i = 0; i < categories.size(); ++i) {
    for (std::size_t j = 0; j < categories.size(); ++j) {
      out += csv_quote(categories[i]) + ',' + csv_quote(categories[j]) + ',' +
             format_fixed(cells[i][j].macro_f1) + ',' + format_fixed(cells[i][j].machine_recall) +
             '\n';
    }
  }
  return out;
}

std::string TransferMatrix::pretty() const {
  std::string out = "rows: training category; columns: evaluation category; F1 (machine recall)\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-24s", "");
  out += buf;
  for (const auto& name : categories) {
    std::snprintf(buf, sizeof(buf), " %-22s", name.c_str());
    out += buf;
  }
  out += '\n';
  for (std::size_t i = 0; i < categories.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%-24s", categories[i].c_str());
    out += buf;
    for (std::size_t j = 0; j < categories.size(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.3f (%.3f)%9s", cells[i][j].macro_f1,
                    cells[i][j].machine_recall, "");
      out += buf;
    }
    out += '\n';
  }
  std::snprintf(buf, sizeof(buf), "config hash: %s\n", hex64(config_hash).c_str());
  out += buf;
  return out;
}

TransferMatrix transfer_experiment(const std::vector<TokenSequence>& human,
                                   const std::vector<NamedCorpus>& categories,
                                   const TransferOptions& options) {
  if (categories.size() < 2)
    throw std::invalid_argument("transfer experiment needs at least 2 machine categories");

  auto human_split = split_for_experiment(human, options.test_fraction,
                                          derive_rng(options.seed, 0));
  std::vector<CorpusSplit> machine_splits;
  machine_splits.reserve(categories.size());
  for (std::size_t i = 0; i < categories.size(); ++i)
    machine_splits.push_back(split_for_experiment(categories[i].second, options.test_fraction,
                                                  derive_rng(options.seed, i + 1)));

  TransferMatrix matrix;
  for (const auto& [name, corpus] : categories) matrix.categories.push_back(name);
  matrix.cells.assign(categories.size(), std::vector<TransferCell>(categories.size()));

  std::vector<std::string> hash_parts = {"transfer", std::to_string(options.seed),
                                         format_double(options.test_fraction),
                                         std::to_string(options.boost.rounds)};
  for (const auto& [name, corpus] : categories) {
    hash_parts.push_back(name);
    hash_parts.push_back(std::to_string(corpus.size()));
  }
  matrix.config_hash = hash_fields(hash_parts);

  for (std::size_t i = 0; i < categories.size(); ++i) {
    std::vector<TokenSequence> train_docs = human_split.train;
    train_docs.insert(train_docs.end(), machine_splits[i].train.begin(),
                      machine_splits[i].train.end());
    FeatureSpace space = FeatureSpace::fit(train_docs, options.features);
    auto train_vectors =
        labeled_vectors(space, human_split.train, machine_splits[i].train, options.jobs);
    BoostedEnsemble ensemble = BoostedEnsemble::train(train_vectors, options.boost);

    for (std::size_t j = 0; j < categories.size(); ++j) {
      auto test_vectors =
          labeled_vectors(space, human_split.test, machine_splits[j].test, options.jobs);
      ClassificationReport report = evaluate(ensemble, test_vectors);
      matrix.cells[i][j] = {report.macro_f1, report.machine.recall};
    }
  }
  return matrix;
}

}  // namespace reviewforge
