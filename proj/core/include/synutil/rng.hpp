#pragma once

#include <cstdint>
#include <vector>

namespace synutil {

// Deterministic 64-bit generator (splitmix64). All randomized routines in the
// library draw through this class so that results are reproducible bit for
// bit across runs and thread counts; replicate streams are derived with
// derive(), never by sharing one stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, n) without modulo bias (rejection sampling).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // Independent child stream for replicate `index`. Mixing the parent seed
  // with the index through splitmix keeps streams uncorrelated.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
    mixer.next_u64();
    return mixer.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace synutil
