#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sigzero {

// Stream split: one master seed, one engine per (cell, replicate) stream.
// The 64-bit ids are fed to seed_seq as 32-bit words; seed_seq's mixing
// makes nearby stream ids statistically independent.
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;  // [0, 1)
}

// Box-Muller pair cache; consumption order is fixed so results are
// schedule-independent for a given stream.
struct GaussianDraw {
  bool have_spare = false;
  double spare = 0.0;
  double operator()(std::mt19937_64& g) {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = 1.0 - uniform01(g);  // (0, 1]
    const double u2 = uniform01(g);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = kTwoPiRad * u2;
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  }
  static constexpr double kTwoPiRad = 6.283185307179586476925286766559;
};

}  // namespace sigzero
