#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace onestreet {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a stream seed from a master seed and an index so that independent
// work items (games, cards) get well-separated generators.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

// Seedable generator with portable output. mt19937_64 is specified bit-exactly
// by the standard; doubles are built from the top 53 bits directly because
// std::uniform_real_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1); zeros are resampled.
  double next_open() {
    double u = next_double();
    while (u == 0.0) u = next_double();
    return u;
  }

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
  }

 private:
  std::mt19937_64 gen_;
};

// Fisher-Yates with our own index draws; std::shuffle is not portable.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.next_below(i)]);
  }
}

}  // namespace onestreet
