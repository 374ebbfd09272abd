#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace pinaccess {

// SplitMix64 (Steele, Lea, Flood 2014). Every random decision in the
// toolkit goes through this generator so results are reproducible across
// platforms and standard libraries.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t v;
    do {
      v = (*this)();
    } while (v >= limit);
    return v % bound;
  }

  // floor(u * n) for u uniform in [0,1) built from the top 53 bits.
  std::uint64_t scaled_unit(std::uint64_t n) {
    const unsigned __int128 u = (*this)() >> 11;
    return static_cast<std::uint64_t>((u * n) >> 53);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Derives an independent stream seed for a named sub-task.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  SplitMix64 g(seed ^ fnv1a64(tag));
  return g();
}

}  // namespace pinaccess
