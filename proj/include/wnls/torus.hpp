#pragma once

// Frequency-lattice geometry for the anisotropic torus T^2 with dispersion
// Q(n) = n1^2 + gamma * n2^2.  The truncation ball and dyadic shells use the
// Euclidean norm of the integer vector; gamma only enters through Q and the
// bilinear pairing.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wnls {

struct FreqIndex {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;

  friend constexpr bool operator==(const FreqIndex&, const FreqIndex&) = default;
  friend constexpr auto operator<=>(const FreqIndex&, const FreqIndex&) = default;

  constexpr FreqIndex operator+(const FreqIndex& o) const { return {n1 + o.n1, n2 + o.n2}; }
  constexpr FreqIndex operator-(const FreqIndex& o) const { return {n1 - o.n1, n2 - o.n2}; }
  constexpr FreqIndex operator-() const { return {-n1, -n2}; }
};

/// Squared Euclidean length of the integer vector (exact).
constexpr std::int64_t norm2(const FreqIndex& n) { return n.n1 * n.n1 + n.n2 * n.n2; }

inline double euclid(const FreqIndex& n) { return std::sqrt(static_cast<double>(norm2(n))); }

namespace detail {

inline int significant_digits(std::string_view s) {
  int count = 0;
  bool leading = true;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

}  // namespace detail

/// Decimal rendering of gamma that round-trips exactly and carries at least
/// 11 significant digits (trailing zeros are appended for short literals).
inline std::string format_gamma(double gamma) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, gamma);
  std::string shortest(buf, res.ptr);
  if (detail::significant_digits(shortest) >= 11 || shortest.find('e') != std::string::npos)
    return shortest;
  const double mag = std::abs(gamma);
  const int int_digits = mag >= 1.0 ? static_cast<int>(std::floor(std::log10(mag))) + 1 : 0;
  int precision = std::max(11 - int_digits, 1);
  if (mag < 1.0 && mag > 0.0) precision = 11 + static_cast<int>(-std::floor(std::log10(mag))) - 1;
  res = std::to_chars(buf, buf + sizeof buf, gamma, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

class TorusSpec {
 public:
  explicit TorusSpec(double gamma = 1.41421356237) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw std::invalid_argument("TorusSpec: gamma must be positive and finite");
  }

  double gamma() const { return gamma_; }
  std::string gamma_string() const { return format_gamma(gamma_); }

  friend bool operator==(const TorusSpec&, const TorusSpec&) = default;

 private:
  double gamma_;
};

namespace presets {
inline constexpr double kSqrt2 = 1.41421356237;
inline constexpr double kGolden = 1.61803398875;
inline constexpr double kRationalOne = 1.0;
inline constexpr double kThreeHalves = 1.5;
}  // namespace presets

/// Accepts a preset name (sqrt2, golden, one, three-halves) or a decimal literal.
inline TorusSpec parse_gamma(std::string_view text) {
  if (text == "sqrt2") return TorusSpec(presets::kSqrt2);
  if (text == "golden") return TorusSpec(presets::kGolden);
  if (text == "one" || text == "rational") return TorusSpec(presets::kRationalOne);
  if (text == "three-halves" || text == "3/2") return TorusSpec(presets::kThreeHalves);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("unrecognized gamma preset or literal: " + std::string(text));
  return TorusSpec(value);
}

/// Q(n) = n1^2 + gamma n2^2.
inline double qform(const FreqIndex& n, const TorusSpec& torus) {
  return static_cast<double>(n.n1 * n.n1) + torus.gamma() * static_cast<double>(n.n2 * n.n2);
}

/// <m,k>_gamma = m1 k1 + gamma m2 k2.
inline double pairing(const FreqIndex& m, const FreqIndex& k, const TorusSpec& torus) {
  return static_cast<double>(m.n1 * k.n1) + torus.gamma() * static_cast<double>(m.n2 * k.n2);
}

inline bool is_dyadic(std::int64_t N) { return N >= 1 && (N & (N - 1)) == 0; }

/// Membership in the dyadic shell N/2 < |n| <= N (scale 1 is 0 < |n| <= 1).
constexpr bool in_shell(const FreqIndex& n, std::int64_t N) {
  const std::int64_t r2 = norm2(n);
  return r2 <= N * N && 4 * r2 > N * N && r2 > 0;
}

constexpr bool in_ball(const FreqIndex& n, std::int64_t N) { return norm2(n) <= N * N; }

/// Scale of the dyadic shell containing n != 0.
inline std::int64_t shell_of(const FreqIndex& n) {
  if (n.n1 == 0 && n.n2 == 0) throw std::invalid_argument("shell_of: origin has no shell");
  std::int64_t N = 1;
  while (!in_shell(n, N)) N *= 2;
  return N;
}

/// Integer points of the shell in lexicographic (n1, n2) order.
inline std::vector<FreqIndex> shell_points(std::int64_t N) {
  if (!is_dyadic(N)) throw std::invalid_argument("shell_points: scale must be a power of two");
  std::vector<FreqIndex> out;
  for (std::int64_t a = -N; a <= N; ++a)
    for (std::int64_t b = -N; b <= N; ++b)
      if (in_shell({a, b}, N)) out.push_back({a, b});
  return out;
}

/// floor(sqrt(v)) for v >= 0; -1 for negative v.
inline std::int64_t isqrt_floor(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// Points of the ball |n| <= N (origin included), lexicographic, with an
/// O(1) lookup table from FreqIndex to position.
class BallIndex {
 public:
  explicit BallIndex(std::int64_t N) : N_(N), side_(2 * N + 1), lookup_(side_ * side_, -1) {
    if (N < 0) throw std::invalid_argument("BallIndex: negative radius");
    for (std::int64_t a = -N; a <= N; ++a) {
      const std::int64_t h = isqrt_floor(N * N - a * a);
      for (std::int64_t b = -h; b <= h; ++b) {
        lookup_[slot({a, b})] = static_cast<std::int64_t>(points_.size());
        points_.push_back({a, b});
      }
    }
  }

  std::int64_t radius() const { return N_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<FreqIndex>& points() const { return points_; }
  const FreqIndex& operator[](std::size_t i) const { return points_[i]; }

  /// Position of n, or -1 when n lies outside the ball.
  std::int64_t find(const FreqIndex& n) const {
    if (n.n1 < -N_ || n.n1 > N_ || n.n2 < -N_ || n.n2 > N_) return -1;
    return lookup_[slot(n)];
  }

  std::int64_t origin() const { return find({0, 0}); }

 private:
  std::size_t slot(const FreqIndex& n) const {
    return static_cast<std::size_t>((n.n1 + N_) * side_ + (n.n2 + N_));
  }

  std::int64_t N_;
  std::int64_t side_;
  std::vector<std::int64_t> lookup_;
  std::vector<FreqIndex> points_;
};

/// Shared immutable ball tables, built once per radius.
inline const BallIndex& ball(std::int64_t N) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<BallIndex>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[N];
  if (!slot) slot = std::make_unique<BallIndex>(N);
  return *slot;
}

}  // namespace wnls
