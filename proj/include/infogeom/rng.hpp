#pragma once
// Deterministic random source. std::mt19937_64 has a fully specified output
// sequence, so results are bit-stable across platforms; the distributions here
// are hand-rolled (53-bit uniforms, Box-Muller normals) because the std::
// distribution adaptors are implementation-defined. Independent streams are
// derived from (seed, stream) through a SplitMix64 mix, which is how per-trial
// and per-particle sequences stay reproducible regardless of evaluation order.

#include <cmath>
#include <cstdint>
#include <random>

namespace infogeom {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  // Decorrelated substream for e.g. trial or particle `stream`.
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t mixed = splitmix64_next(s);
    s = seed ^ (0xd1342543de82ef95ULL * (stream + 1));
    mixed ^= splitmix64_next(s);
    engine_.seed(mixed);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace infogeom
