#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "reviewforge/features.hpp"
#include "reviewforge/manifest.hpp"
#include "reviewforge/text.hpp"

namespace reviewforge::cli {

// Seed precedence: explicit --seed, then REVIEWFORGE_SEED, then the
// subcommand's default. Throws when the environment value is not an
// unsigned integer.
std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value,
                           std::uint64_t default_value);

RunManifest start_manifest(std::string subcommand, std::vector<std::string> argv,
                           std::uint64_t seed);

// <primary>.manifest.json unless an explicit path was given.
std::filesystem::path manifest_path(const std::string& explicit_path,
                                    const std::filesystem::path& primary_output);

// <dir>/manifest.json unless an explicit path was given; for subcommands
// whose primary output is a directory.
std::filesystem::path manifest_path_in_dir(const std::string& explicit_path,
                                           const std::filesystem::path& dir);

// One review per line; lines are normalized through the cleaning pass
// (idempotent on already-clean text).
std::vector<TokenSequence> read_token_lines(const std::filesystem::path& path);
void write_token_lines(const std::filesystem::path& path,
                       const std::vector<TokenSequence>& reviews);

// "human<TAB>text" / "machine<TAB>text" per line.
struct LabeledCorpus {
  std::vector<TokenSequence> human;
  std::vector<TokenSequence> machine;
};
LabeledCorpus read_labeled_tsv(const std::filesystem::path& path);

// Comma-separated group names out of {readability, pos, word, char}.
// Throws std::invalid_argument on an unknown name.
FeatureConfig parse_feature_list(const std::string& csv);

}  // namespace reviewforge::cli
