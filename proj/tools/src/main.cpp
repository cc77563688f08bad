#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_common.hpp"
#include "json.hpp"
#include "reviewforge/adaboost.hpp"
#include "reviewforge/corpus.hpp"
#include "reviewforge/harness.hpp"
#include "reviewforge/hash.hpp"
#include "reviewforge/io.hpp"
#include "reviewforge/manifest.hpp"
#include "reviewforge/ngram_lm.hpp"
#include "reviewforge/obfuscate.hpp"
#include "reviewforge/penalty.hpp"
#include "reviewforge/sample_corpus.hpp"
#include "reviewforge/version.hpp"

namespace {

using namespace reviewforge;
namespace fs = std::filesystem;

// Keeps inline obfuscation streams disjoint from the generation streams,
// which are derived from the plain seed.
constexpr std::uint64_t kObfuscationSeedSalt = 0x6f62667573636174ULL;

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ',';
    out += item;
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

std::vector<Context> load_contexts(const fs::path& path) {
  std::vector<Context> contexts;
  for (const auto& line : read_lines(path)) contexts.push_back(parse_context_line(line));
  return contexts;
}

GrammarSet load_grammar(const std::string& path) {
  return path.empty() ? GrammarSet::defaults() : GrammarSet::load(path);
}

// ---------------------------------------------------------------- preprocess

struct PreprocessOpts {
  std::string input;
  std::string output_dir;
  std::uint64_t min_count = 10;
  std::size_t n_val = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> keep_tags{"restaurants"};
  bool no_tag_filter = false;
  bool keep_case = false;
  FieldMap fields;
  std::string manifest_override;
};

void run_preprocess(const PreprocessOpts& opt, const std::vector<std::string>& argv) {
  const std::uint64_t seed = cli::resolve_seed(opt.seed_given, opt.seed, 0);
  IngestOptions ingest;
  ingest.fields = opt.fields;
  ingest.keep_tags = opt.no_tag_filter ? std::vector<std::string>{} : opt.keep_tags;
  ingest.lowercase = !opt.keep_case;

  const fs::path out_dir = opt.output_dir;
  RunManifest manifest = cli::start_manifest("preprocess", argv, seed);
  manifest.flags = {{"input", opt.input},
                    {"output-dir", opt.output_dir},
                    {"min-count", std::to_string(opt.min_count)},
                    {"val", std::to_string(opt.n_val)},
                    {"test", std::to_string(opt.n_test)},
                    {"seed", std::to_string(seed)},
                    {"keep-tags", join_list(ingest.keep_tags)},
                    {"lowercase", ingest.lowercase ? "1" : "0"}};
  manifest.record_input("raw", opt.input);

  IngestStats stats;
  auto pairs = ingest_jsonl(opt.input, ingest, &stats);
  ParallelCorpus corpus = split_corpus(std::move(pairs), opt.n_val, opt.n_test, seed);
  Vocabulary vocab = Vocabulary::build(corpus.train, opt.min_count);

  struct SplitOut {
    const char* name;
    const std::vector<ReviewPair>* pairs;
  };
  const SplitOut splits[] = {
      {"train", &corpus.train}, {"val", &corpus.val}, {"test", &corpus.test}};
  for (const auto& split : splits) {
    if (split.pairs->empty()) continue;
    manifest.record_output(std::string(split.name) + ".context",
                           out_dir / (std::string(split.name) + ".context.txt"));
    manifest.record_output(std::string(split.name) + ".review",
                           out_dir / (std::string(split.name) + ".review.txt"));
  }
  manifest.record_output("vocab", out_dir / "vocab.tsv");
  const fs::path manifest_file = cli::manifest_path_in_dir(opt.manifest_override, out_dir);
  manifest.save(manifest_file);

  for (const auto& split : splits) {
    if (split.pairs->empty()) continue;
    write_pair_files(out_dir / (std::string(split.name) + ".context.txt"),
                     out_dir / (std::string(split.name) + ".review.txt"), *split.pairs);
  }
  vocab.save(out_dir / "vocab.tsv");
  manifest.finalize_outputs();
  manifest.save(manifest_file);

  std::printf("parsed %zu records: kept %zu, dropped %zu by tag, %zu empty\n", stats.parsed,
              stats.kept, stats.dropped_by_tag, stats.dropped_empty);
  std::printf("splits: train %zu, val %zu, test %zu\n", corpus.train.size(), corpus.val.size(),
              corpus.test.size());
  std::printf("vocabulary: %d tokens (+EOS), hash %s\n", vocab.size(),
              hex64(vocab.hash()).c_str());
}

// ------------------------------------------------------------------ train-lm

struct TrainLmOpts {
  std::string contexts;
  std::string reviews;
  std::string vocab;
  std::string output;
  int order = 4;
  double discount = 0.75;
  std::string eval_contexts;
  std::string eval_reviews;
  std::string manifest_override;
};

void run_train_lm(const TrainLmOpts& opt, const std::vector<std::string>& argv) {
  RunManifest manifest = cli::start_manifest("train-lm", argv, 0);
  manifest.flags = {{"contexts", opt.contexts},   {"reviews", opt.reviews},
                    {"vocab", opt.vocab},         {"output", opt.output},
                    {"order", std::to_string(opt.order)},
                    {"discount", format_double(opt.discount)}};
  manifest.record_input("contexts", opt.contexts);
  manifest.record_input("reviews", opt.reviews);
  manifest.record_input("vocab", opt.vocab);
  manifest.record_output("lm", opt.output);
  const fs::path manifest_file = cli::manifest_path(opt.manifest_override, opt.output);
  manifest.save(manifest_file);

  auto pairs = read_pair_files(opt.contexts, opt.reviews);
  Vocabulary vocab = Vocabulary::load(opt.vocab);
  NgramLM lm = NgramLM::train(pairs, std::move(vocab),
                              NgramConfig{opt.order, opt.discount});
  lm.save(opt.output);
  manifest.finalize_outputs();
  manifest.save(manifest_file);

  std::printf("trained order-%d model on %zu pairs\n", opt.order, pairs.size());
  if (!opt.eval_contexts.empty() && !opt.eval_reviews.empty()) {
    auto eval_pairs = read_pair_files(opt.eval_contexts, opt.eval_reviews);
    std::printf("held-out perplexity: %.3f over %zu pairs\n", perplexity(lm, eval_pairs),
                eval_pairs.size());
  }
}

// ------------------------------------------------------------------ generate

struct GenerateOpts {
  std::string lm;
  std::string contexts;
  std::string output = "reviews.txt";
  std::size_t n = 0;  // 0: one review per context line
  GenerationParams params;
  bool seed_given = false;
  std::string grammar;
  std::string metadata;
  unsigned jobs = 0;
  std::string manifest_override;
};

void run_generate(const GenerateOpts& opt, const std::vector<std::string>& argv) {
  GenerationParams params = opt.params;
  params.seed = cli::resolve_seed(opt.seed_given, params.seed, 0);
  params.validate();

  RunManifest manifest = cli::start_manifest("generate", argv, params.seed);
  manifest.flags = {{"lm", opt.lm},
                    {"contexts", opt.contexts},
                    {"output", opt.output},
                    {"n", std::to_string(opt.n)},
                    {"b", format_double(params.b)},
                    {"lambda", format_double(params.lambda)},
                    {"alpha", format_double(params.alpha)},
                    {"min-len", std::to_string(params.min_len)},
                    {"max-len", std::to_string(params.max_len)},
                    {"p-typo", format_double(params.p_typo)},
                    {"p-spell", format_double(params.p_spell)},
                    {"seed", std::to_string(params.seed)},
                    {"grammar", opt.grammar.empty() ? "default" : opt.grammar}};
  manifest.record_input("lm", opt.lm);
  manifest.record_input("contexts", opt.contexts);
  if (!opt.grammar.empty()) manifest.record_input("grammar", opt.grammar);
  const fs::path metadata_path =
      opt.metadata.empty() ? fs::path(opt.output + ".meta.json") : fs::path(opt.metadata);
  manifest.record_output("reviews", opt.output);
  manifest.record_output("metadata", metadata_path);
  const fs::path manifest_file = cli::manifest_path(opt.manifest_override, opt.output);
  manifest.save(manifest_file);

  NgramLM lm = NgramLM::load(opt.lm);
  std::vector<Context> contexts = load_contexts(opt.contexts);
  if (opt.n > 0 && !contexts.empty()) {
    std::vector<Context> cycled;
    cycled.reserve(opt.n);
    for (std::size_t i = 0; i < opt.n; ++i) cycled.push_back(contexts[i % contexts.size()]);
    contexts = std::move(cycled);
  }
  GrammarSet grammar = load_grammar(opt.grammar);

  auto results = generate_batch(lm, contexts, params, grammar, opt.jobs);
  std::vector<TokenSequence> reviews;
  reviews.reserve(results.size());
  for (auto& r : results) reviews.push_back(std::move(r.tokens));
  if (params.p_typo > 0.0 || params.p_spell > 0.0) {
    reviews = obfuscate_batch(reviews, params.p_typo, params.p_spell,
                              SpellingRuleSet::defaults(), KeyboardWeights::defaults(),
                              lm.vocabulary(), mix64(params.seed ^ kObfuscationSeedSalt),
                              opt.jobs);
  }
  cli::write_token_lines(opt.output, reviews);

  nlohmann::ordered_json meta;
  meta["b"] = params.b;
  meta["lambda"] = params.lambda;
  meta["alpha"] = params.alpha;
  meta["min_len"] = params.min_len;
  meta["max_len"] = params.max_len;
  meta["p_typo"] = params.p_typo;
  meta["p_spell"] = params.p_spell;
  meta["seed"] = params.seed;
  meta["reviews"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    meta["reviews"].push_back({{"index", i},
                               {"length", reviews[i].size()},
                               {"review_mask_hash", hex64(results[i].review_mask_hash)}});
  }
  write_file(metadata_path, meta.dump(2) + "\n");

  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::printf("generated %zu reviews\n", reviews.size());
}

// ----------------------------------------------------------------- obfuscate

struct ObfuscateOpts {
  std::string input;
  std::string output;
  double p_typo = 0.0;
  double p_spell = 0.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string rules;
  std::string weights;
  std::string vocab;
  unsigned jobs = 0;
  std::string manifest_override;
};

void run_obfuscate(const ObfuscateOpts& opt, const std::vector<std::string>& argv) {
  const std::uint64_t seed = cli::resolve_seed(opt.seed_given, opt.seed, 0);
  RunManifest manifest = cli::start_manifest("obfuscate", argv, seed);
  manifest.flags = {{"input", opt.input},
                    {"output", opt.output},
                    {"p-typo", format_double(opt.p_typo)},
                    {"p-spell", format_double(opt.p_spell)},
                    {"seed", std::to_string(seed)},
                    {"rules", opt.rules.empty() ? "default" : opt.rules},
                    {"weights", opt.weights.empty() ? "default" : opt.weights},
                    {"vocab", opt.vocab.empty() ? "none" : opt.vocab}};
  manifest.record_input("reviews", opt.input);
  if (!opt.rules.empty()) manifest.record_input("rules", opt.rules);
  if (!opt.weights.empty()) manifest.record_input("weights", opt.weights);
  if (!opt.vocab.empty()) manifest.record_input("vocab", opt.vocab);
  manifest.record_output("obfuscated", opt.output);
  const fs::path manifest_file = cli::manifest_path(opt.manifest_override, opt.output);
  manifest.save(manifest_file);

  auto reviews = cli::read_token_lines(opt.input);
  SpellingRuleSet rules =
      opt.rules.empty() ? SpellingRuleSet::defaults() : SpellingRuleSet::load(opt.rules);
  KeyboardWeights weights =
      opt.weights.empty() ? KeyboardWeights::defaults() : KeyboardWeights::load(opt.weights);
  Vocabulary dictionary;  // empty: no real-word boost
  if (!opt.vocab.empty()) dictionary = Vocabulary::load(opt.vocab);

  auto out = obfuscate_batch(reviews, opt.p_typo, opt.p_spell, rules, weights, dictionary, seed,
                             opt.jobs);
  cli::write_token_lines(opt.output, out);
  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::printf("obfuscated %zu reviews\n", out.size());
}

// ------------------------------------------------------------ train-detector

struct TrainDetectorOpts {
  std::string human;
  std::string machine;
  std::string data;
  std::string output;
  std::string features = "readability,pos,word,char";
  int rounds = 200;
  int depth = 2;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double test_fraction = 1.0 / 3.0;
  std::size_t min_per_class = 1000;
  double imbalance_warn = 1.5;
  int bins = 20;
  unsigned jobs = 0;
  std::string report_path;
  std::string histogram_path;
  std::string manifest_override;
};

void run_train_detector(const TrainDetectorOpts& opt, const std::vector<std::string>& argv) {
  const std::uint64_t seed = cli::resolve_seed(opt.seed_given, opt.seed, 0);
  RunManifest manifest = cli::start_manifest("train-detector", argv, seed);
  manifest.flags = {{"output", opt.output},
                    {"features", opt.features},
                    {"rounds", std::to_string(opt.rounds)},
                    {"depth", std::to_string(opt.depth)},
                    {"seed", std::to_string(seed)},
                    {"test-fraction", format_double(opt.test_fraction)},
                    {"min-per-class", std::to_string(opt.min_per_class)}};

  cli::LabeledCorpus corpus;
  if (!opt.data.empty()) {
    manifest.flags["data"] = opt.data;
    manifest.record_input("data", opt.data);
    corpus = cli::read_labeled_tsv(opt.data);
  } else {
    manifest.flags["human"] = opt.human;
    manifest.flags["machine"] = opt.machine;
    manifest.record_input("human", opt.human);
    manifest.record_input("machine", opt.machine);
    corpus.human = cli::read_token_lines(opt.human);
    corpus.machine = cli::read_token_lines(opt.machine);
  }

  const fs::path report_path =
      opt.report_path.empty() ? fs::path(opt.output + ".report.txt") : fs::path(opt.report_path);
  const fs::path report_csv = fs::path(opt.output + ".report.csv");
  const fs::path histogram_path = opt.histogram_path.empty()
                                      ? fs::path(opt.output + ".histogram.csv")
                                      : fs::path(opt.histogram_path);
  manifest.record_output("model", opt.output);
  manifest.record_output("report", report_path);
  manifest.record_output("report_csv", report_csv);
  manifest.record_output("histogram", histogram_path);
  const fs::path manifest_file = cli::manifest_path(opt.manifest_override, opt.output);
  manifest.save(manifest_file);

  DetectorExperimentOptions exp;
  exp.features = cli::parse_feature_list(opt.features);
  exp.boost = BoostOptions{opt.rounds, opt.depth, seed};
  exp.split_seed = seed;
  exp.test_fraction = opt.test_fraction;
  exp.min_per_class = opt.min_per_class;
  exp.imbalance_warn_ratio = opt.imbalance_warn;
  exp.histogram_bins = opt.bins;
  exp.jobs = opt.jobs;

  DetectorExperimentResult result = detector_experiment(corpus.human, corpus.machine, exp);
  result.detector.save(opt.output);
  write_file(report_path, result.report.pretty());
  write_file(report_csv, result.report.csv());
  write_file(histogram_path, result.histogram.csv());
  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::fputs(result.report.pretty().c_str(), stdout);
}

// -------------------------------------------------------------------- detect

struct DetectOpts {
  std::string model;
  std::string input;
  std::string output = "detections.csv";
  std::string manifest_override;
};

void run_detect(const DetectOpts& opt, const std::vector<std::string>& argv) {
  RunManifest manifest = cli::start_manifest("detect", argv, 0);
  manifest.flags = {{"model", opt.model}, {"input", opt.input}, {"output", opt.output}};
  manifest.record_input("model", opt.model);
  manifest.record_input("reviews", opt.input);
  manifest.record_output("detections", opt.output);
  const fs::path manifest_file = cli::manifest_path(opt.manifest_override, opt.output);
  manifest.save(manifest_file);

  DetectorModel model = DetectorModel::load(opt.model);
  const auto lines = read_lines(opt.input);

  bool any_actual = false;
  struct Row {
    Label predicted;
    double margin;
    std::string actual;
  };
  std::vector<Row> rows;
  rows.reserve(lines.size());
  for (const auto& line : lines) {
    std::string actual;
    std::string text = line;
    const auto tab = line.find('\t');
    if (tab != std::string::npos) {
      const std::string prefix = line.substr(0, tab);
      if (prefix == "human" || prefix == "machine") {
        actual = prefix;
        text = line.substr(tab + 1);
        any_actual = true;
      }
    }
    double margin = 0.0;
    const Label predicted = model.classify(tokenize(clean_text(text)), &margin);
    rows.push_back({predicted, margin, std::move(actual)});
  }

  std::string csv = any_actual ? "index,predicted,margin,actual\n" : "index,predicted,margin\n";
  char buf[128];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const char* label = rows[i].predicted == Label::kMachine ? "machine" : "human";
    std::snprintf(buf, sizeof(buf), "%zu,%s,%.6f", i, label, rows[i].margin);
    csv += buf;
    if (any_actual) {
      csv += ',';
      csv += rows[i].actual;
    }
    csv += '\n';
  }
  write_file(opt.output, csv);
  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::fputs(csv.c_str(), stdout);
}

// --------------------------------------------------------------------- sweep

struct SweepOpts {
  std::string lm;
  std::string contexts;
  std::string run_dir;
  std::string cells;  // "b:lambda,b:lambda,..."; empty = default grid
  std::size_t n = 200;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double alpha = 2.0 / 3.0;
  int min_len = 10;
  int max_len = 50;
  std::string grammar;
  unsigned jobs = 0;
  std::string manifest_override;
};

std::vector<SweepCell> parse_cells(const std::string& text) {
  std::vector<SweepCell> cells;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--cells", "expected b:lambda, got \"" + item + "\"");
    try {
      cells.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw CLI::ValidationError("--cells", "cannot parse \"" + item + "\"");
    }
    start = end + 1;
  }
  if (cells.empty()) throw CLI::ValidationError("--cells", "no cells given");
  return cells;
}

std::string cell_file_name(std::size_t index, const CellDiversity& cell) {
  if (index == 0) return "cell0_greedy.txt";
  return "cell" + std::to_string(index) + "_b" + format_double(cell.b) + "_lam" +
         format_double(cell.lambda) + ".txt";
}

void run_sweep_cmd(const SweepOpts& opt, const std::vector<std::string>& argv) {
  SweepConfig config;
  if (!opt.cells.empty()) config.cells = parse_cells(opt.cells);
  config.reviews_per_cell = opt.n;
  config.seed = cli::resolve_seed(opt.seed_given, opt.seed, 0);
  config.base.alpha = opt.alpha;
  config.base.min_len = opt.min_len;
  config.base.max_len = opt.max_len;
  config.jobs = opt.jobs;

  RunManifest manifest = cli::start_manifest("sweep", argv, config.seed);
  std::string cells_text;
  for (const auto& cell : config.cells) {
    if (!cells_text.empty()) cells_text += ',';
    cells_text += format_double(cell.b) + ":" + format_double(cell.lambda);
  }
  manifest.flags = {{"lm", opt.lm},
                    {"contexts", opt.contexts},
                    {"run-dir", opt.run_dir},
                    {"cells", cells_text},
                    {"n", std::to_string(opt.n)},
                    {"seed", std::to_string(config.seed)},
                    {"alpha", format_double(opt.alpha)},
                    {"min-len", std::to_string(opt.min_len)},
                    {"max-len", std::to_string(opt.max_len)},
                    {"grammar", opt.grammar.empty() ? "default" : opt.grammar}};
  manifest.record_input("lm", opt.lm);
  manifest.record_input("contexts", opt.contexts);
  if (!opt.grammar.empty()) manifest.record_input("grammar", opt.grammar);

  NgramLM lm = NgramLM::load(opt.lm);
  std::vector<Context> contexts = load_contexts(opt.contexts);
  GrammarSet grammar = load_grammar(opt.grammar);
  const fs::path run_dir = opt.run_dir;

  SweepResult result = run_sweep(lm, contexts, config, grammar);

  for (std::size_t c = 0; c < result.reviews.size(); ++c) {
    manifest.record_output("reviews:" + result.report.cells[c].label,
                           run_dir / "reviews" / cell_file_name(c, result.report.cells[c]));
  }
  manifest.record_output("diversity_csv", run_dir / "reports" / "diversity.csv");
  manifest.record_output("diversity_txt", run_dir / "reports" / "diversity.txt");
  const fs::path manifest_file = cli::manifest_path_in_dir(opt.manifest_override, run_dir);
  manifest.save(manifest_file);

  for (std::size_t c = 0; c < result.reviews.size(); ++c) {
    cli::write_token_lines(run_dir / "reviews" / cell_file_name(c, result.report.cells[c]),
                           result.reviews[c]);
  }
  write_file(run_dir / "reports" / "diversity.csv", result.report.csv());
  write_file(run_dir / "reports" / "diversity.txt", result.report.pretty());
  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::fputs(result.report.pretty().c_str(), stdout);
}

// ------------------------------------------------------------------ transfer

struct TransferOpts2 {
  std::string human;
  std::vector<std::string> categories;  // name=path
  std::string run_dir;
  int rounds = 200;
  int depth = 2;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double test_fraction = 1.0 / 3.0;
  int char_max = 3;
  unsigned jobs = 0;
  std::string manifest_override;
};

void run_transfer(const TransferOpts2& opt, const std::vector<std::string>& argv) {
  const std::uint64_t seed = cli::resolve_seed(opt.seed_given, opt.seed, 0);
  RunManifest manifest = cli::start_manifest("transfer", argv, seed);
  manifest.flags = {{"human", opt.human},
                    {"run-dir", opt.run_dir},
                    {"categories", join_list(opt.categories)},
                    {"rounds", std::to_string(opt.rounds)},
                    {"depth", std::to_string(opt.depth)},
                    {"seed", std::to_string(seed)},
                    {"test-fraction", format_double(opt.test_fraction)}};
  manifest.record_input("human", opt.human);

  std::vector<NamedCorpus> categories;
  for (const auto& item : opt.categories) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw CLI::ValidationError("--category", "expected name=path, got \"" + item + "\"");
    const std::string name = item.substr(0, eq);
    const std::string path = item.substr(eq + 1);
    manifest.record_input("category:" + name, path);
    categories.emplace_back(name, cli::read_token_lines(path));
  }

  const fs::path run_dir = opt.run_dir;
  manifest.record_output("transfer_csv", run_dir / "reports" / "transfer.csv");
  manifest.record_output("transfer_txt", run_dir / "reports" / "transfer.txt");
  const fs::path manifest_file = cli::manifest_path_in_dir(opt.manifest_override, run_dir);
  manifest.save(manifest_file);

  TransferOptions options;
  options.boost = BoostOptions{opt.rounds, opt.depth, seed};
  options.seed = seed;
  options.test_fraction = opt.test_fraction;
  options.features.char_max_n = opt.char_max;
  options.jobs = opt.jobs;

  TransferMatrix matrix =
      transfer_experiment(cli::read_token_lines(opt.human), categories, options);
  write_file(run_dir / "reports" / "transfer.csv", matrix.csv());
  write_file(run_dir / "reports" / "transfer.txt", matrix.pretty());
  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::fputs(matrix.pretty().c_str(), stdout);
}

// -------------------------------------------------------------------- report

struct ReportOpts {
  std::string input;
  std::string output;
  std::string csv_output;
  std::string manifest_override;
};

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    auto end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

void run_report(const ReportOpts& opt, const std::vector<std::string>& argv) {
  RunManifest manifest = cli::start_manifest("report", argv, 0);
  const fs::path output =
      opt.output.empty() ? fs::path(opt.input + ".report.txt") : fs::path(opt.output);
  const fs::path csv_output =
      opt.csv_output.empty() ? fs::path(opt.input + ".report.csv") : fs::path(opt.csv_output);
  manifest.flags = {{"input", opt.input},
                    {"output", output.string()},
                    {"csv", csv_output.string()}};
  manifest.record_input("detections", opt.input);
  manifest.record_output("report", output);
  manifest.record_output("report_csv", csv_output);
  const fs::path manifest_file = cli::manifest_path(opt.manifest_override, output);
  manifest.save(manifest_file);

  const auto lines = read_lines(opt.input);
  if (lines.empty()) throw std::runtime_error(opt.input + " is empty");
  const auto header = split_csv_row(lines[0]);
  std::ptrdiff_t predicted_col = -1, actual_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "predicted") predicted_col = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "actual") actual_col = static_cast<std::ptrdiff_t>(i);
  }
  if (predicted_col < 0 || actual_col < 0)
    throw std::runtime_error(opt.input + ": need \"predicted\" and \"actual\" columns");

  auto parse_label = [&](const std::string& value, std::size_t line_no) -> std::int8_t {
    if (value == "machine") return 1;
    if (value == "human") return -1;
    throw std::runtime_error(opt.input + " line " + std::to_string(line_no) +
                             ": unknown label \"" + value + "\"");
  };
  std::vector<std::int8_t> predicted, actual;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv_row(lines[i]);
    const auto needed = static_cast<std::size_t>(std::max(predicted_col, actual_col));
    if (fields.size() <= needed)
      throw std::runtime_error(opt.input + " line " + std::to_string(i + 1) +
                               ": too few columns");
    predicted.push_back(parse_label(fields[static_cast<std::size_t>(predicted_col)], i + 1));
    actual.push_back(parse_label(fields[static_cast<std::size_t>(actual_col)], i + 1));
  }

  ClassificationReport report = report_from_predictions(predicted, actual);
  write_file(output, report.pretty());
  write_file(csv_output, report.csv());
  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::fputs(report.pretty().c_str(), stdout);
}

// ------------------------------------------------------------- sample-corpus

struct SampleCorpusOpts {
  std::string output = "sample.jsonl";
  std::size_t count = 12000;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string manifest_override;
};

void run_sample_corpus(const SampleCorpusOpts& opt, const std::vector<std::string>& argv) {
  const std::uint64_t seed = cli::resolve_seed(opt.seed_given, opt.seed, 1);
  RunManifest manifest = cli::start_manifest("sample-corpus", argv, seed);
  manifest.flags = {{"output", opt.output},
                    {"count", std::to_string(opt.count)},
                    {"seed", std::to_string(seed)}};
  manifest.record_output("corpus", opt.output);
  const fs::path manifest_file = cli::manifest_path(opt.manifest_override, opt.output);
  manifest.save(manifest_file);

  write_sample_jsonl(opt.output, SampleCorpusOptions{opt.count, seed});
  manifest.finalize_outputs();
  manifest.save(manifest_file);
  std::printf("wrote %zu synthetic records to %s\n", opt.count, opt.output.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fake-review generation and detection toolkit"};
  app.set_version_flag("--version", std::string(reviewforge::kVersion));
  app.require_subcommand(1);
  const std::vector<std::string> argv_vec(argv, argv + argc);

  auto pre = std::make_shared<PreprocessOpts>();
  {
    CLI::App* cmd = app.add_subcommand("preprocess",
                                       "ingest raw JSON-lines reviews into aligned "
                                       "context/review files plus a vocabulary");
    cmd->add_option("--input", pre->input, "raw JSON-lines file")->required();
    cmd->add_option("--output-dir", pre->output_dir, "directory for split files and vocab")
        ->required();
    cmd->add_option("--min-count", pre->min_count, "vocabulary frequency threshold")
        ->capture_default_str();
    cmd->add_option("--val", pre->n_val, "validation pairs")->capture_default_str();
    cmd->add_option("--test", pre->n_test, "test pairs")->capture_default_str();
    auto* seed_opt = cmd->add_option("--seed", pre->seed, "split shuffle seed");
    cmd->add_option("--keep-tag", pre->keep_tags,
                    "keep records carrying this tag (repeatable)")
        ->capture_default_str();
    cmd->add_flag("--no-tag-filter", pre->no_tag_filter, "keep records regardless of tags");
    cmd->add_flag("--keep-case", pre->keep_case, "skip lowercasing");
    cmd->add_option("--field-text", pre->fields.review_text, "JSON field for review text")
        ->capture_default_str();
    cmd->add_option("--field-stars", pre->fields.rating, "JSON field for the star rating")
        ->capture_default_str();
    cmd->add_option("--field-name", pre->fields.business_name, "JSON field for business name")
        ->capture_default_str();
    cmd->add_option("--field-city", pre->fields.city, "JSON field for city")
        ->capture_default_str();
    cmd->add_option("--field-state", pre->fields.state, "JSON field for state")
        ->capture_default_str();
    cmd->add_option("--field-tags", pre->fields.tags, "JSON field for category tags")
        ->capture_default_str();
    cmd->add_option("--manifest", pre->manifest_override, "manifest path override");
    cmd->callback([pre, seed_opt, &argv_vec] {
      pre->seed_given = seed_opt->count() > 0;
      run_preprocess(*pre, argv_vec);
    });
  }

  auto tlm = std::make_shared<TrainLmOpts>();
  {
    CLI::App* cmd = app.add_subcommand("train-lm", "fit the backoff n-gram model");
    cmd->add_option("--contexts", tlm->contexts, "training context file")->required();
    cmd->add_option("--reviews", tlm->reviews, "training review file")->required();
    cmd->add_option("--vocab", tlm->vocab, "vocabulary file")->required();
    cmd->add_option("--output", tlm->output, "model file to write")->required();
    cmd->add_option("--order", tlm->order, "n-gram order")->capture_default_str();
    cmd->add_option("--discount", tlm->discount, "absolute discount")->capture_default_str();
    cmd->add_option("--eval-contexts", tlm->eval_contexts, "held-out context file");
    cmd->add_option("--eval-reviews", tlm->eval_reviews, "held-out review file");
    cmd->add_option("--manifest", tlm->manifest_override, "manifest path override");
    cmd->callback([tlm, &argv_vec] { run_train_lm(*tlm, argv_vec); });
  }

  auto gen = std::make_shared<GenerateOpts>();
  {
    CLI::App* cmd = app.add_subcommand("generate", "decode reviews with penalty augmentation");
    cmd->add_option("--lm", gen->lm, "trained model file")->required();
    cmd->add_option("--contexts", gen->contexts, "context file, one per line")->required();
    cmd->add_option("--output", gen->output, "review file to write")->capture_default_str();
    cmd->add_option("--n", gen->n, "review count (cycles contexts); 0 = one per context")
        ->capture_default_str();
    cmd->add_option("--b", gen->params.b, "review-level penalty probability")
        ->capture_default_str();
    cmd->add_option("--lambda", gen->params.lambda, "penalty strength (<= 0)")
        ->capture_default_str();
    cmd->add_option("--alpha", gen->params.alpha, "start-penalty decay")->capture_default_str();
    cmd->add_option("--min-len", gen->params.min_len, "minimum review length")
        ->capture_default_str();
    cmd->add_option("--max-len", gen->params.max_len, "maximum review length")
        ->capture_default_str();
    cmd->add_option("--p-typo", gen->params.p_typo, "inline typo probability")
        ->capture_default_str();
    cmd->add_option("--p-spell", gen->params.p_spell, "inline misspelling probability")
        ->capture_default_str();
    auto* seed_opt = cmd->add_option("--seed", gen->params.seed, "generation seed");
    cmd->add_option("--grammar", gen->grammar, "grammar token list override");
    cmd->add_option("--metadata", gen->metadata, "sidecar metadata path");
    cmd->add_option("--jobs", gen->jobs, "worker threads (0 = cores)")->capture_default_str();
    cmd->add_option("--manifest", gen->manifest_override, "manifest path override");
    cmd->callback([gen, seed_opt, &argv_vec] {
      gen->seed_given = seed_opt->count() > 0;
      run_generate(*gen, argv_vec);
    });
  }

  auto obf = std::make_shared<ObfuscateOpts>();
  {
    CLI::App* cmd = app.add_subcommand("obfuscate", "re-spell and typo words in reviews");
    cmd->add_option("--input", obf->input, "review file")->required();
    cmd->add_option("--output", obf->output, "obfuscated file to write")->required();
    cmd->add_option("--p-typo", obf->p_typo, "typo probability per word")
        ->capture_default_str();
    cmd->add_option("--p-spell", obf->p_spell, "misspelling probability per word")
        ->capture_default_str();
    auto* seed_opt = cmd->add_option("--seed", obf->seed, "sampling seed");
    cmd->add_option("--rules", obf->rules, "spelling rule TSV override");
    cmd->add_option("--weights", obf->weights, "keyboard weight JSON override");
    cmd->add_option("--vocab", obf->vocab, "vocabulary whose words boost typo sampling");
    cmd->add_option("--jobs", obf->jobs, "worker threads (0 = cores)")->capture_default_str();
    cmd->add_option("--manifest", obf->manifest_override, "manifest path override");
    cmd->callback([obf, seed_opt, &argv_vec] {
      obf->seed_given = seed_opt->count() > 0;
      run_obfuscate(*obf, argv_vec);
    });
  }

  auto det = std::make_shared<TrainDetectorOpts>();
  {
    CLI::App* cmd = app.add_subcommand("train-detector",
                                       "boost shallow trees over stylometric features");
    cmd->add_option("--human", det->human, "human review file, one per line");
    cmd->add_option("--machine", det->machine, "machine review file, one per line");
    cmd->add_option("--data", det->data, "labeled TSV (label<TAB>text) instead");
    cmd->add_option("--output", det->output, "detector file to write")->required();
    cmd->add_option("--features", det->features, "groups: readability,pos,word,char")
        ->capture_default_str();
    cmd->add_option("--rounds", det->rounds, "boosting rounds")->capture_default_str();
    cmd->add_option("--depth", det->depth, "tree depth")->capture_default_str();
    auto* seed_opt = cmd->add_option("--seed", det->seed, "split seed");
    cmd->add_option("--test-fraction", det->test_fraction, "held-out fraction per class")
        ->capture_default_str();
    cmd->add_option("--min-per-class", det->min_per_class, "minimum reviews per class")
        ->capture_default_str();
    cmd->add_option("--imbalance-warn", det->imbalance_warn,
                    "warn when class sizes differ by this ratio")
        ->capture_default_str();
    cmd->add_option("--bins", det->bins, "margin histogram bins")->capture_default_str();
    cmd->add_option("--jobs", det->jobs, "worker threads (0 = cores)")->capture_default_str();
    cmd->add_option("--report", det->report_path, "report text path override");
    cmd->add_option("--histogram", det->histogram_path, "histogram CSV path override");
    cmd->add_option("--manifest", det->manifest_override, "manifest path override");
    cmd->callback([det, seed_opt, &argv_vec] {
      det->seed_given = seed_opt->count() > 0;
      if (det->data.empty() && (det->human.empty() || det->machine.empty()))
        throw CLI::ValidationError("train-detector",
                                   "provide --data or both --human and --machine");
      try {
        cli::parse_feature_list(det->features);
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("--features", e.what());
      }
      run_train_detector(*det, argv_vec);
    });
  }

  auto dct = std::make_shared<DetectOpts>();
  {
    CLI::App* cmd = app.add_subcommand("detect", "label reviews with a trained detector");
    cmd->add_option("--model", dct->model, "detector file")->required();
    cmd->add_option("--input", dct->input,
                    "review file; lines may carry a human/machine<TAB> prefix")
        ->required();
    cmd->add_option("--output", dct->output, "detection CSV to write")->capture_default_str();
    cmd->add_option("--manifest", dct->manifest_override, "manifest path override");
    cmd->callback([dct, &argv_vec] { run_detect(*dct, argv_vec); });
  }

  auto swp = std::make_shared<SweepOpts>();
  {
    CLI::App* cmd = app.add_subcommand("sweep",
                                       "generate per-cell corpora over the (b, lambda) grid "
                                       "plus a greedy baseline, with diversity metrics");
    cmd->add_option("--lm", swp->lm, "trained model file")->required();
    cmd->add_option("--contexts", swp->contexts, "context file")->required();
    cmd->add_option("--run-dir", swp->run_dir, "output directory")->required();
    cmd->add_option("--cells", swp->cells, "comma list of b:lambda cells (default grid)");
    cmd->add_option("--n", swp->n, "reviews per cell")->capture_default_str();
    auto* seed_opt = cmd->add_option("--seed", swp->seed, "sweep seed");
    cmd->add_option("--alpha", swp->alpha, "start-penalty decay")->capture_default_str();
    cmd->add_option("--min-len", swp->min_len, "minimum review length")->capture_default_str();
    cmd->add_option("--max-len", swp->max_len, "maximum review length")->capture_default_str();
    cmd->add_option("--grammar", swp->grammar, "grammar token list override");
    cmd->add_option("--jobs", swp->jobs, "worker threads (0 = cores)")->capture_default_str();
    cmd->add_option("--manifest", swp->manifest_override, "manifest path override");
    cmd->callback([swp, seed_opt, &argv_vec] {
      swp->seed_given = seed_opt->count() > 0;
      run_sweep_cmd(*swp, argv_vec);
    });
  }

  auto tra = std::make_shared<TransferOpts2>();
  {
    CLI::App* cmd = app.add_subcommand("transfer",
                                       "cross-category detectability matrix with char n-gram "
                                       "features");
    cmd->add_option("--human", tra->human, "human review file")->required();
    cmd->add_option("--category", tra->categories, "machine corpus as name=path (repeatable)")
        ->required()
        ->expected(-2);
    cmd->add_option("--run-dir", tra->run_dir, "output directory")->required();
    cmd->add_option("--rounds", tra->rounds, "boosting rounds")->capture_default_str();
    cmd->add_option("--depth", tra->depth, "tree depth")->capture_default_str();
    auto* seed_opt = cmd->add_option("--seed", tra->seed, "split seed");
    cmd->add_option("--test-fraction", tra->test_fraction, "held-out fraction")
        ->capture_default_str();
    cmd->add_option("--char-max", tra->char_max, "longest character n-gram")
        ->capture_default_str();
    cmd->add_option("--jobs", tra->jobs, "worker threads (0 = cores)")->capture_default_str();
    cmd->add_option("--manifest", tra->manifest_override, "manifest path override");
    cmd->callback([tra, seed_opt, &argv_vec] {
      tra->seed_given = seed_opt->count() > 0;
      run_transfer(*tra, argv_vec);
    });
  }

  auto rep = std::make_shared<ReportOpts>();
  {
    CLI::App* cmd = app.add_subcommand("report",
                                       "precision/recall/F report from a detection CSV with "
                                       "predicted and actual columns");
    cmd->add_option("--input", rep->input, "detection CSV")->required();
    cmd->add_option("--output", rep->output, "report text path");
    cmd->add_option("--csv", rep->csv_output, "report CSV path");
    cmd->add_option("--manifest", rep->manifest_override, "manifest path override");
    cmd->callback([rep, &argv_vec] { run_report(*rep, argv_vec); });
  }

  auto smp = std::make_shared<SampleCorpusOpts>();
  {
    CLI::App* cmd = app.add_subcommand("sample-corpus",
                                       "write the bundled synthetic restaurant corpus");
    cmd->add_option("--output", smp->output, "JSON-lines file to write")->capture_default_str();
    cmd->add_option("--count", smp->count, "record count")->capture_default_str();
    auto* seed_opt = cmd->add_option("--seed", smp->seed, "generator seed");
    cmd->add_option("--manifest", smp->manifest_override, "manifest path override");
    cmd->callback([smp, seed_opt, &argv_vec] {
      smp->seed_given = seed_opt->count() > 0;
      run_sample_corpus(*smp, argv_vec);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
