#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace coadapt::num {

// Deterministic random source. All distributions are implemented on top of
// the raw 64-bit stream so that results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)), base_seed_(mix(seed)) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t integer(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;  // avoid modulo bias
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Derive an independent child stream, stable in (seed, tag, index).
  Rng fork(std::string_view tag, std::uint64_t index = 0) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (const char c : tag) h = mix(h ^ static_cast<std::uint64_t>(c));
    return Rng(base_seed_ ^ h ^ mix(index + 1));
  }

  std::uint64_t raw() { return gen_(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  std::uint64_t base_seed_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace coadapt::num
