#pragma once

#include <cmath>
#include <cstdint>

namespace rbw {

// Counter-based random stream. Every draw is a pure function of
// (master_seed, stream_index, counter), so trajectories replay bit-identically
// and parallel runs never share state. Conditioning on a prefix is done by
// replaying the prefix counters and switching the stream index afterwards.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Word at an absolute counter position; does not touch the cursor.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t n) {
    std::uint64_t z = seed;
    z = mix64(z ^ (stream + kGamma));
    z = mix64(z ^ (n * kGamma + 0x632be59bd9b4e019ULL));
    return mix64(z + n);
  }

  std::uint64_t next_u64() { return at(seed, stream, counter++); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // True with probability q.
  bool bernoulli(double q) { return next_unit() < q; }

  double normal() {
    // Box-Muller; consumes two counters. Used only in test utilities.
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

}  // namespace rbw
