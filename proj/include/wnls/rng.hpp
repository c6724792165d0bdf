#pragma once

// Counter-based Philox4x32-10 and the complex Gaussian transform built on it.
//
// A draw is a pure function of (key, counter), so the coefficient attached to
// a lattice point never depends on how many other coefficients were drawn
// before it or on which thread drew it.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace wnls {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

  static Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static Counter round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

inline constexpr const char* kPrngId = "philox4x32-10/box-muller-v1";

/// Uniform in the open interval (0, 1) from the top 53 bits of a 64-bit word.
inline double uniform_open(std::uint64_t x) { return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53; }

/// Standard complex Gaussian (E|g|^2 = 1, real and imaginary parts of
/// variance 1/2) keyed by seed and a 3-word address.
///
///   words = philox(counter = (a0, a1, a2, 0), key = seed)
///   u1 = uniform_open(w1:w0), u2 = uniform_open(w3:w2)
///   g  = sqrt(-ln u1) * exp(2 pi i u2)
///
/// |g|^2 = -ln u1 is exactly Exp(1), so P(|g| > lambda) = exp(-lambda^2).
inline std::complex<double> complex_gaussian(std::uint64_t seed, std::uint32_t a0, std::uint32_t a1,
                                             std::uint32_t a2) {
  const auto w = Philox4x32::generate({a0, a1, a2, 0u}, Philox4x32::key_from_seed(seed));
  const double u1 = uniform_open((static_cast<std::uint64_t>(w[1]) << 32) | w[0]);
  const double u2 = uniform_open((static_cast<std::uint64_t>(w[3]) << 32) | w[2]);
  const double r = std::sqrt(-std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

/// Sequence of uniforms at counter (a0, a1, a2, i), i = 0, 1, ...  Stream 0
/// (a2 = 0) belongs to the initial data and stream 1 to the chaos trials;
/// harness cell sampling uses a2 = 2.
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint32_t a0, std::uint32_t a1, std::uint32_t a2)
      : key_(Philox4x32::key_from_seed(seed)), a0_(a0), a1_(a1), a2_(a2) {}

  double operator()() {
    const auto w = Philox4x32::generate({a0_, a1_, a2_, next_++}, key_);
    return uniform_open((static_cast<std::uint64_t>(w[1]) << 32) | w[0]);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::min(n - 1, static_cast<std::uint64_t>((*this)() * static_cast<double>(n)));
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t a0_, a1_, a2_;
  std::uint32_t next_ = 0;
};

}  // namespace wnls
