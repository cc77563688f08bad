#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

namespace reviewforge {

// splitmix64 finalizer; used to spread user seeds and derive stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded generator with fully specified output. mt19937_64 is defined by the
// standard bit-for-bit; the uniform draws below avoid std distributions,
// whose results vary across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Uniform integer in [0, n) by rejection sampling. n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return v % n;
  }

  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  std::mt19937_64 gen_;
};

// Independent stream for item `index` under a run-level seed.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(seed ^ mix64(index + 1)));
}

// Fisher-Yates with our own draws, so the permutation is identical on every
// platform (std::shuffle is unspecified across standard libraries).
template <typename Container>
void shuffle(Container& items, Rng& rng) {
  using std::swap;
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    swap(items[i - 1], items[j]);
  }
}

}  // namespace reviewforge
