#include "cli_common.hpp"

#include <cstdlib>
#include <stdexcept>

#include "reviewforge/io.hpp"
#include "reviewforge/version.hpp"

namespace reviewforge::cli {

std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value,
                           std::uint64_t default_value) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("REVIEWFORGE_SEED")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::runtime_error("REVIEWFORGE_SEED is not an unsigned integer: " +
                               std::string(env));
    return value;
  }
  return default_value;
}

RunManifest start_manifest(std::string subcommand, std::vector<std::string> argv,
                           std::uint64_t seed) {
  RunManifest manifest;
  manifest.tool_version = std::string(kVersion);
  manifest.subcommand = std::move(subcommand);
  manifest.argv = std::move(argv);
  manifest.seed = seed;
  return manifest;
}

std::filesystem::path manifest_path(const std::string& explicit_path,
                                    const std::filesystem::path& primary_output) {
  if (!explicit_path.empty()) return explicit_path;
  return primary_output.string() + ".manifest.json";
}

std::filesystem::path manifest_path_in_dir(const std::string& explicit_path,
                                           const std::filesystem::path& dir) {
  if (!explicit_path.empty()) return explicit_path;
  return dir / "manifest.json";
}

std::vector<TokenSequence> read_token_lines(const std::filesystem::path& path) {
  std::vector<TokenSequence> reviews;
  for (const auto& line : read_lines(path)) reviews.push_back(tokenize(clean_text(line)));
  return reviews;
}

void write_token_lines(const std::filesystem::path& path,
                       const std::vector<TokenSequence>& reviews) {
  std::vector<std::string> lines;
  lines.reserve(reviews.size());
  for (const auto& review : reviews) lines.push_back(detokenize(review));
  write_lines(path, lines);
}

LabeledCorpus read_labeled_tsv(const std::filesystem::path& path) {
  LabeledCorpus corpus;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path.string() + " line " + std::to_string(line_no) +
                               ": expected label<TAB>text");
    const std::string label = line.substr(0, tab);
    TokenSequence tokens = tokenize(clean_text(line.substr(tab + 1)));
    if (label == "human")
      corpus.human.push_back(std::move(tokens));
    else if (label == "machine")
      corpus.machine.push_back(std::move(tokens));
    else
      throw std::runtime_error(path.string() + " line " + std::to_string(line_no) +
                               ": unknown label \"" + label + "\" (want human or machine)");
  }
  return corpus;
}

FeatureConfig parse_feature_list(const std::string& csv) {
  FeatureConfig config;
  config.readability = config.pos_ngrams = config.word_unigrams = config.char_ngrams = false;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto end = csv.find(',', start);
    if (end == std::string::npos) end = csv.size();
    const std::string name = csv.substr(start, end - start);
    if (name == "readability")
      config.readability = true;
    else if (name == "pos")
      config.pos_ngrams = true;
    else if (name == "word")
      config.word_unigrams = true;
    else if (name == "char")
      config.char_ngrams = true;
    else if (!name.empty())
      throw std::invalid_argument("unknown feature group \"" + name +
                                  "\" (want readability, pos, word, char)");
    start = end + 1;
  }
  if (!config.readability && !config.pos_ngrams && !config.word_unigrams &&
      !config.char_ngrams)
    throw std::invalid_argument("feature list selects nothing");
  return config;
}

}  // namespace reviewforge::cli
