#ifndef CORRTHERM_RNG_HPP
#define CORRTHERM_RNG_HPP

#include <cstdint>
#include <random>
#include <span>

namespace corrtherm {

// Seedable generator used for every random draw in the library.  mt19937_64
// is fully specified by the standard, so identical seeds give identical
// streams on every platform.  Outputs that depend on randomness record the
// seed together with kGeneratorId.
class Rng {
 public:
  static constexpr const char* kGeneratorId = "mt19937_64";

  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0,1) with 53 random mantissa bits; avoids the
  // implementation-defined std::uniform_real_distribution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0,n) by rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Index distributed according to `weights` (nonnegative, summing to ~1)
  // via CDF inversion; the final index absorbs rounding slack.
  int sample(std::span<const double> weights) {
    const double u = uniform01();
    double cdf = 0.0;
    for (std::size_t j = 0; j + 1 < weights.size(); ++j) {
      cdf += weights[j];
      if (u < cdf) return static_cast<int>(j);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  // Stream splitting: worker `stream` under `master` gets an independent
  // seed via the splitmix64 finalizer, so batch results do not depend on
  // how work is divided.
  static std::uint64_t split(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace corrtherm

#endif
