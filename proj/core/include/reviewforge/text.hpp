#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reviewforge {

using TokenSequence = std::vector<std::string>;

// Normalizes raw text to the corpus form: printable ASCII only, runs of
// whitespace collapsed to single spaces, every non-alphanumeric printable
// character split off as a standalone token, optionally lowercased.
// Idempotent. May return an empty string; callers filter.
std::string clean_text(std::string_view raw, bool lowercase = true);

// Splits cleaned text on single spaces.
TokenSequence tokenize(std::string_view cleaned);

std::string detokenize(std::span<const std::string> tokens);

// A word token starts with an alphanumeric character; cleaned tokens are
// either all-alphanumeric or a single punctuation character.
bool is_word_token(std::string_view token);
bool is_punct_token(std::string_view token);

}  // namespace reviewforge
