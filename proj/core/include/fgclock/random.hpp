#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fgclock {

// Deterministic seed mixing (splitmix64 finalizer). Used to derive per-trial
// and per-purpose seeds from a master seed by a fixed counter scheme:
//   trial seed  = derive_seed(master, {axis_index, trial_index})
//   path stream = derive_seed(trial seed, {kPathStream})
//   obs stream  = derive_seed(trial seed, {kObservationStream})
inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline constexpr std::uint64_t kPathStream = 0;
inline constexpr std::uint64_t kObservationStream = 1;

// A named seeded stream. Uniforms are built from the top 53 bits of a 64-bit
// Mersenne twister so the same seed gives the same doubles on every run.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Inverse-CDF transform: -log(1 - u) / rate, u in [0, 1).
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  double normal(double stddev) {
    if (stddev == 0.0) return 0.0;
    return stddev * standard_normal_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> standard_normal_{0.0, 1.0};
};

}  // namespace fgclock
