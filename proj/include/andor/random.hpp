#pragma once

#include <cstdint>
#include <random>

namespace andor {

// Seeded generator with distribution helpers written out by hand, so a
// given seed yields the same stream with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, stream) pairs, e.g. one per trial.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix(seed ^ splitmix(stream + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool coin(double p_true = 0.5) { return uniform() < p_true; }

  double sign() { return coin() ? 1.0 : -1.0; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace andor
