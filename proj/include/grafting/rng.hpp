#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace grafting {

// All randomness in the library flows through Rng: a std::mt19937_64 seeded
// through splitmix64 so that nearby seeds give unrelated streams.  Substreams
// are derived from (seed, tag) so each experiment stage draws independently of
// the others and results are reproducible from the single --seed value.
//
// Doubles are produced from the raw 64-bit output (53-bit mantissa path), not
// std::uniform_real_distribution, so sequences are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t tag_hash(std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    return h;
  }

  // Independent substream for a named stage.
  static Rng stream(std::uint64_t seed, std::string_view tag) {
    return Rng(splitmix64(seed ^ tag_hash(tag)));
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection to kill modulo bias; n is always tiny here.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = bits();
    } while (x >= limit);
    return x % n;
  }

 private:
  explicit Rng(std::uint64_t raw, int) : engine_(raw) {}
  std::mt19937_64 engine_;
};

}  // namespace grafting
