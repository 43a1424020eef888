#pragma once

#include <cstdint>
#include <vector>

namespace udk {

// splitmix64: the pinned project PRNG. Chosen because its full algorithm fits in
// a dozen lines and therefore reproduces bit-identically everywhere, unlike the
// unspecified internals of std distributions.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, n) by rejection; n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    // largest multiple of n representable in 64 bits
    std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
    std::uint64_t r;
    do {
      r = next();
    } while (r > limit);
    return r % n;
  }
};

/// In-place Fisher-Yates, unbiased via rejection sampling.
template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace udk
