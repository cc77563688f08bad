#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "reviewforge/text.hpp"

namespace reviewforge {

// Coarse part-of-speech tags (the universal 17-tag set). Tagging is a pure
// per-token function: closed-class lexicon first, then suffix rules, noun as
// the open-class fallback.
enum class PosTag : std::uint8_t {
  kAdj,
  kAdp,
  kAdv,
  kAux,
  kCconj,
  kDet,
  kIntj,
  kNoun,
  kNum,
  kPart,
  kPron,
  kPropn,
  kPunct,
  kSconj,
  kSym,
  kVerb,
  kX,
};

inline constexpr std::size_t kPosTagCount = 17;

std::string_view pos_tag_name(PosTag tag);

PosTag tag_token(std::string_view token);

std::vector<PosTag> pos_tag(const TokenSequence& tokens);

}  // namespace reviewforge
