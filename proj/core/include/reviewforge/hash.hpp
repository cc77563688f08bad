#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace reviewforge {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

// FNV-1a over raw bytes; chain calls by passing the previous digest as seed.
inline std::uint64_t fnv1a(std::string_view bytes,
                           std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value);

// Digest of a file's full contents. Throws std::runtime_error if unreadable.
std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace reviewforge
