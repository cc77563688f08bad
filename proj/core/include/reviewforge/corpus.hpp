#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reviewforge/text.hpp"

namespace reviewforge {

struct RawRecord {
  std::string review_text;
  int rating = 0;  // stars, 1..5
  std::string business_name;
  std::string city;
  std::string state;
  std::vector<std::string> tags;
};

// Business metadata rendered as the conditioning prefix. Field order in
// tokens() is fixed: rating, name, city, state, tags.
struct Context {
  int rating = 0;
  std::string name;
  std::string city;
  std::string state;
  std::vector<std::string> tags;

  TokenSequence tokens() const;
  std::string text() const;
};

struct ReviewPair {
  Context context;
  TokenSequence review;
};

struct ParallelCorpus {
  std::vector<ReviewPair> train;
  std::vector<ReviewPair> val;
  std::vector<ReviewPair> test;
};

// JSON field names for ingestion; defaults match the merged Yelp-style
// layout produced by `reviewforge sample-corpus`.
struct FieldMap {
  std::string review_text = "text";
  std::string rating = "stars";
  std::string business_name = "name";
  std::string city = "city";
  std::string state = "state";
  std::string tags = "categories";
};

struct IngestOptions {
  FieldMap fields;
  // Records are kept only if at least one tag matches an entry (exact match
  // after cleaning). Empty list keeps everything.
  std::vector<std::string> keep_tags = {"restaurants"};
  bool lowercase = true;
};

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IngestStats {
  std::size_t parsed = 0;
  std::size_t kept = 0;
  std::size_t dropped_by_tag = 0;
  std::size_t dropped_empty = 0;
};

Context build_context(const RawRecord& record, bool lowercase = true);

// Parses one JSON object. Throws IngestError naming the first missing or
// ill-typed field. `where` is prepended to messages (e.g. "line 12").
RawRecord parse_record(const std::string& json_line, const FieldMap& fields,
                       const std::string& where = {});

std::vector<ReviewPair> make_pairs(const std::vector<RawRecord>& records,
                                   const IngestOptions& options, IngestStats* stats = nullptr);

std::vector<ReviewPair> ingest_jsonl(const std::filesystem::path& path,
                                     const IngestOptions& options, IngestStats* stats = nullptr);

// Deterministic shuffle-then-cut split; val and test are drawn first,
// the remainder is train.
ParallelCorpus split_corpus(std::vector<ReviewPair> pairs, std::size_t n_val, std::size_t n_test,
                            std::uint64_t seed);

// Rebuilds a Context from one flat line. The structure is not recoverable:
// a leading star count 1-5 is kept as the rating and the rest lands in name,
// which is enough for text()/tokens() to round-trip.
Context parse_context_line(const std::string& line);

// Aligned two-file representation: contexts and reviews line by line.
void write_pair_files(const std::filesystem::path& context_path,
                      const std::filesystem::path& review_path,
                      const std::vector<ReviewPair>& pairs);
std::vector<ReviewPair> read_pair_files(const std::filesystem::path& context_path,
                                        const std::filesystem::path& review_path);

}  // namespace reviewforge
