#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace gram {

// Philox4x32-10 counter-based generator. Stateless: every block is a pure
// function of (counter, key), so any draw can be addressed directly and
// results do not depend on how work is split across threads.
struct Philox4x32 {
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> c,
                                            std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
      std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
      std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k = {k[0] + kW0, k[1] + kW1};
    }
    return c;
  }
};

// Addressed complex Gaussian draws, CN(0,1): real and imaginary parts each
// N(0, 1/2). One Philox block per draw via Box-Muller in polar form.
// Streams are typically per-trial; lanes separate independent matrices
// within a trial. Trials above 2^64 or draws above 2^64 are not supported.
inline std::complex<double> complex_gaussian(std::uint64_t seed,
                                             std::uint64_t stream,
                                             std::uint32_t lane,
                                             std::uint64_t index) {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32),
      lane ^ static_cast<std::uint32_t>(stream >> 32),
      static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                      static_cast<std::uint32_t>(seed >> 32)};
  auto w = Philox4x32::block(ctr, key);
  std::uint64_t a = (static_cast<std::uint64_t>(w[1]) << 32) | w[0];
  std::uint64_t b = (static_cast<std::uint64_t>(w[3]) << 32) | w[2];
  // u1 in (0,1] so log is finite; u2 in [0,1)
  double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
  double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  double radius = std::sqrt(-std::log(u1));
  double angle = 2.0 * M_PI * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace gram
