#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "reviewforge/corpus.hpp"

namespace reviewforge {

// Deterministic synthetic review corpus in the merged JSON-lines layout the
// ingester expects. It exists so the end-to-end experiments run without any
// external dataset: templated slot-filled reviews over a roster of invented
// restaurants, with rating-dependent sentiment and cuisine-dependent dishes.
struct SampleCorpusOptions {
  std::size_t count = 12000;
  std::uint64_t seed = 1;
};

std::vector<RawRecord> make_sample_records(const SampleCorpusOptions& options = {});

// One JSON object per line, fields: text, stars, name, city, state,
// categories.
void write_sample_jsonl(const std::filesystem::path& path,
                        const SampleCorpusOptions& options = {});

}  // namespace reviewforge
