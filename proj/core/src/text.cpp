#include "reviewforge/text.hpp"

#include <cctype>

namespace reviewforge {

namespace {

inline bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

std::string clean_text(std::string_view raw, bool lowercase) {
  std::string out;
  out.reserve(raw.size() + raw.size() / 4);
  bool pending_space = false;
  auto push = [&](char c) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  };
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = true;
      continue;
    }
    if (c < 0x20 || c > 0x7e) continue;  // drop control bytes and non-ASCII
    if (is_alnum(c)) {
      push(lowercase ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    } else {
      // Punctuation becomes its own token regardless of surrounding spaces.
      pending_space = true;
      push(c);
      pending_space = true;
    }
  }
  return out;
}

TokenSequence tokenize(std::string_view cleaned) {
  TokenSequence tokens;
  size_t start = 0;
  while (start < cleaned.size()) {
    size_t end = cleaned.find(' ', start);
    if (end == std::string_view::npos) end = cleaned.size();
    if (end > start) tokens.emplace_back(cleaned.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (!out.empty()) out.push_back(' ');
    out.append(tok);
  }
  return out;
}

bool is_word_token(std::string_view token) {
  return !token.empty() && is_alnum(static_cast<unsigned char>(token.front()));
}

bool is_punct_token(std::string_view token) {
  return !token.empty() && !is_alnum(static_cast<unsigned char>(token.front()));
}

}  // namespace reviewforge
