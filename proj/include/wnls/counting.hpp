#pragma once

// Exact enumeration of the resonance sets
//
//   S = {(n1, n2, n3) : |n_i| in shell N_i, <n2-n1, n2-n3>_gamma in [mu-W, mu+W],
//        and (Wick) n2 not in {n1, n3}}
//
// with one or two of the n_i fixed.  Every count has two routes: an
// exhaustive oracle that scans the free shell(s), and an optimized
// enumerator that only visits a thin superset of the solution set (a line
// band for count_fix12, an annulus for count_fix13).  Both routes accept a
// candidate only through the same membership predicate, so they agree
// exactly, floating-point window edges included.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "wnls/parallel.hpp"
#include "wnls/torus.hpp"

namespace wnls {

struct ResonanceQuery {
  std::int64_t N1 = 1;
  std::int64_t N2 = 1;
  std::int64_t N3 = 1;
  double mu = 0.0;
  double W = 1.0;
  TorusSpec torus{};
  bool wick = true;

  bool in_window(double level) const { return level >= mu - W && level <= mu + W; }

  void validate() const {
    if (!is_dyadic(N1) || !is_dyadic(N2) || !is_dyadic(N3))
      throw std::invalid_argument("ResonanceQuery: scales must be powers of two");
    if (!(W >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("ResonanceQuery: need W >= 0 and finite mu");
  }
};

enum class CountMethod { oracle, strip };

inline const char* to_string(CountMethod m) { return m == CountMethod::oracle ? "oracle" : "strip"; }

struct FixedPoints {
  std::optional<FreqIndex> n1, n2, n3;
};

struct CountRecord {
  ResonanceQuery query;
  FixedPoints fixed;
  std::uint64_t count = 0;
  CountMethod method = CountMethod::oracle;
  double elapsed = 0.0;  // seconds
};

/// <n2 - n1, n2 - n3>_gamma.
inline double resonance_level(const FreqIndex& n1, const FreqIndex& n2, const FreqIndex& n3,
                              const TorusSpec& torus) {
  return pairing(n2 - n1, n2 - n3, torus);
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Membership with n1, n2 fixed and n3 free.
inline bool member_n3(const FreqIndex& n1, const FreqIndex& n2, const FreqIndex& n3, const ResonanceQuery& q) {
  if (!in_shell(n3, q.N3)) return false;
  if (q.wick && (n3 == n2 || n2 == n1)) return false;
  return q.in_window(resonance_level(n1, n2, n3, q.torus));
}

// Membership with n1, n3 fixed and n2 free.
inline bool member_n2(const FreqIndex& n1, const FreqIndex& n2, const FreqIndex& n3, const ResonanceQuery& q) {
  if (!in_shell(n2, q.N2)) return false;
  if (q.wick && (n2 == n1 || n2 == n3)) return false;
  return q.in_window(resonance_level(n1, n2, n3, q.torus));
}

// Integer interval [ceil(lo) - 1, floor(hi) + 1] so that rounding in the
// bound computation can never drop a solution.
struct IntRange {
  std::int64_t lo, hi;
};

inline IntRange widen(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  return {static_cast<std::int64_t>(std::ceil(lo)) - 1, static_cast<std::int64_t>(std::floor(hi)) + 1};
}

inline IntRange clip(IntRange r, std::int64_t lo, std::int64_t hi) {
  return {std::max(r.lo, lo), std::min(r.hi, hi)};
}

// Counts n3 on the row (or column) `line` of the band around the line
// <d, n3> = L0 - mu.  `rows_along_n2` selects whether the outer loop runs
// over the second coordinate (solving for the first) or vice versa.
inline std::uint64_t band_line(const FreqIndex& n1, const FreqIndex& n2, const ResonanceQuery& q, bool rows_along_n2,
                               std::int64_t line) {
  const FreqIndex d = n2 - n1;
  const double g = q.torus.gamma();
  const double L0 = pairing(d, n2, q.torus);
  const double lo = L0 - q.mu - q.W;
  const double hi = L0 - q.mu + q.W;
  const std::int64_t N = q.N3;
  const std::int64_t extent = isqrt_floor(N * N - line * line);
  if (extent < 0) return 0;
  std::uint64_t count = 0;
  if (rows_along_n2) {
    // line = y; d1 x in [lo - g d2 y, hi - g d2 y]
    const double shift = g * static_cast<double>(d.n2 * line);
    const double a = static_cast<double>(d.n1);
    IntRange r = clip(widen((lo - shift) / a, (hi - shift) / a), -extent, extent);
    for (std::int64_t x = r.lo; x <= r.hi; ++x)
      if (member_n3(n1, n2, {x, line}, q)) ++count;
  } else {
    // line = x; g d2 y in [lo - d1 x, hi - d1 x]
    const double shift = static_cast<double>(d.n1 * line);
    const double a = g * static_cast<double>(d.n2);
    IntRange r = clip(widen((lo - shift) / a, (hi - shift) / a), -extent, extent);
    for (std::int64_t y = r.lo; y <= r.hi; ++y)
      if (member_n3(n1, n2, {line, y}, q)) ++count;
  }
  return count;
}

inline bool band_rows_along_n2(const FreqIndex& d, const TorusSpec& torus) {
  // Solve for the coordinate whose coefficient is largest: fewest candidates.
  return std::abs(static_cast<double>(d.n1)) >= torus.gamma() * std::abs(static_cast<double>(d.n2));
}

// Strip enumeration for fixed n1 != n2, sequential.
inline std::uint64_t band_count(const FreqIndex& n1, const FreqIndex& n2, const ResonanceQuery& q) {
  const FreqIndex d = n2 - n1;
  if (d.n1 == 0 && d.n2 == 0) {
    std::uint64_t c = 0;
    for (const auto& n3 : shell_points(q.N3))
      if (member_n3(n1, n2, n3, q)) ++c;
    return c;
  }
  const bool rows = band_rows_along_n2(d, q.torus);
  std::uint64_t c = 0;
  for (std::int64_t line = -q.N3; line <= q.N3; ++line) c += band_line(n1, n2, q, rows, line);
  return c;
}

// Annulus enumeration of n2 for fixed n1, n3 along one row y.  In doubled
// coordinates X = 2x - s1, Y = 2y - s2 (s = n1 + n3) the constraint reads
// X^2 + gamma Y^2 in [Q(n1 - n3) + 4(mu - W), Q(n1 - n3) + 4(mu + W)].
inline std::uint64_t annulus_row(const FreqIndex& n1, const FreqIndex& n3, const ResonanceQuery& q, std::int64_t y) {
  const std::int64_t N = q.N2;
  const std::int64_t extent = isqrt_floor(N * N - y * y);
  if (extent < 0) return 0;
  const FreqIndex s = n1 + n3;
  const double qd = qform(n1 - n3, q.torus);
  const double Y = static_cast<double>(2 * y - s.n2);
  const double gy = q.torus.gamma() * Y * Y;
  const double outer = qd + 4.0 * (q.mu + q.W) - gy;
  if (outer < -1e-9 * (1.0 + std::abs(qd) + gy)) return 0;
  const double inner = qd + 4.0 * (q.mu - q.W) - gy;
  const double xo = std::sqrt(std::max(outer, 0.0));
  const double xi = std::sqrt(std::max(inner, 0.0));
  const double s1 = static_cast<double>(s.n1);
  std::uint64_t count = 0;
  // Right branch X in [xi, xo], left branch X in [-xo, -xi]; x = (s1 + X) / 2.
  IntRange right = clip(widen((s1 + xi) / 2.0, (s1 + xo) / 2.0), -extent, extent);
  IntRange left = clip(widen((s1 - xo) / 2.0, (s1 - xi) / 2.0), -extent, extent);
  if (left.hi >= right.lo) {  // branches touch: merge to avoid double counting
    left.hi = std::max(left.hi, right.hi);
    right = {1, 0};
  }
  for (auto r : {left, right})
    for (std::int64_t x = r.lo; x <= r.hi; ++x)
      if (member_n2(n1, {x, y}, n3, q)) ++count;
  return count;
}

}  // namespace detail

struct CountOptions {
  unsigned workers = 1;
};

/// #S(n1, n2): n3 in shell N3.  Requires n1 != n2.
inline CountRecord count_fix12(const FreqIndex& n1, const FreqIndex& n2, const ResonanceQuery& q, CountMethod method,
                               CountOptions opt = {}) {
  q.validate();
  if (n1 == n2) throw std::invalid_argument("count_fix12: n1 == n2 leaves the band constraint degenerate");
  const auto t0 = detail::Clock::now();
  CountRecord rec{q, {n1, n2, std::nullopt}, 0, method, 0.0};
  const std::size_t lines = static_cast<std::size_t>(2 * q.N3 + 1);
  if (method == CountMethod::oracle) {
    rec.count = parallel_count(lines, opt.workers, [&](std::size_t i) {
      const std::int64_t x = static_cast<std::int64_t>(i) - q.N3;
      std::uint64_t c = 0;
      for (std::int64_t y = -q.N3; y <= q.N3; ++y)
        if (detail::member_n3(n1, n2, {x, y}, q)) ++c;
      return c;
    });
  } else {
    const bool rows = detail::band_rows_along_n2(n2 - n1, q.torus);
    rec.count = parallel_count(lines, opt.workers, [&](std::size_t i) {
      return detail::band_line(n1, n2, q, rows, static_cast<std::int64_t>(i) - q.N3);
    });
  }
  rec.elapsed = detail::seconds_since(t0);
  return rec;
}

/// #S(n2, n3): n1 in shell N1.  The level is symmetric under n1 <-> n3, so
/// this is count_fix12 with the roles relabeled.
inline CountRecord count_fix23(const FreqIndex& n2, const FreqIndex& n3, const ResonanceQuery& q, CountMethod method,
                               CountOptions opt = {}) {
  ResonanceQuery relabeled = q;
  relabeled.N3 = q.N1;
  relabeled.N1 = q.N3;
  CountRecord rec = count_fix12(n3, n2, relabeled, method, opt);
  rec.query = q;
  rec.fixed = {std::nullopt, n2, n3};
  return rec;
}

/// #S(n1, n3): n2 in shell N2.
inline CountRecord count_fix13(const FreqIndex& n1, const FreqIndex& n3, const ResonanceQuery& q, CountMethod method,
                               CountOptions opt = {}) {
  q.validate();
  const auto t0 = detail::Clock::now();
  CountRecord rec{q, {n1, std::nullopt, n3}, 0, method, 0.0};
  const std::size_t lines = static_cast<std::size_t>(2 * q.N2 + 1);
  if (method == CountMethod::oracle) {
    rec.count = parallel_count(lines, opt.workers, [&](std::size_t i) {
      const std::int64_t x = static_cast<std::int64_t>(i) - q.N2;
      std::uint64_t c = 0;
      for (std::int64_t y = -q.N2; y <= q.N2; ++y)
        if (detail::member_n2(n1, {x, y}, n3, q)) ++c;
      return c;
    });
  } else {
    rec.count = parallel_count(lines, opt.workers, [&](std::size_t i) {
      return detail::annulus_row(n1, n3, q, static_cast<std::int64_t>(i) - q.N2);
    });
  }
  rec.elapsed = detail::seconds_since(t0);
  return rec;
}

/// #S(n1): pairs (n2, n3).  The strip route reuses the count_fix12 band for
/// every n2 of shell N2; the work is partitioned over n2.
inline CountRecord count_fix1(const FreqIndex& n1, const ResonanceQuery& q, CountMethod method, CountOptions opt = {}) {
  q.validate();
  const auto t0 = detail::Clock::now();
  CountRecord rec{q, {n1, std::nullopt, std::nullopt}, 0, method, 0.0};
  const auto outer = shell_points(q.N2);
  if (method == CountMethod::oracle) {
    const auto inner = shell_points(q.N3);
    rec.count = parallel_count(outer.size(), opt.workers, [&](std::size_t i) {
      std::uint64_t c = 0;
      for (const auto& n3 : inner)
        if (detail::member_n3(n1, outer[i], n3, q)) ++c;
      return c;
    });
  } else {
    rec.count = parallel_count(outer.size(), opt.workers, [&](std::size_t i) {
      if (q.wick && outer[i] == n1) return std::uint64_t{0};
      return detail::band_count(n1, outer[i], q);
    });
  }
  rec.elapsed = detail::seconds_since(t0);
  return rec;
}

}  // namespace wnls
