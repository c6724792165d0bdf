#pragma once

// Points of the stretched lattice Lambda = Z x gamma Z near a circle: the
// geometric input to the annulus counting bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "wnls/torus.hpp"

namespace wnls {

struct ArcSpec {
  double radius = 1.0;
  double thickness_coeff = 1.0;  // neighborhood half-width is thickness_coeff / radius
  double arc_angle = 2.0 * std::numbers::pi;
  double center_angle = 0.0;

  void validate() const {
    if (!(radius > 0.0) || !(thickness_coeff > 0.0) || !(arc_angle > 0.0) || arc_angle > 2.0 * std::numbers::pi + 1e-15)
      throw std::invalid_argument("ArcSpec: need R > 0, c > 0, 0 < theta <= 2 pi");
  }
};

namespace detail {

inline bool arc_member(std::int64_t a, std::int64_t b, const ArcSpec& arc, const TorusSpec& torus) {
  const double x = static_cast<double>(a);
  const double y = torus.gamma() * static_cast<double>(b);
  const double r = std::hypot(x, y);
  if (std::abs(r - arc.radius) > arc.thickness_coeff / arc.radius) return false;
  if (arc.arc_angle >= 2.0 * std::numbers::pi) return true;
  const double diff = std::remainder(std::atan2(y, x) - arc.center_angle, 2.0 * std::numbers::pi);
  return std::abs(diff) <= arc.arc_angle / 2.0;
}

}  // namespace detail

/// Exhaustive scan over the bounding box of the outer circle.
inline std::uint64_t annulus_arc_count_scan(const ArcSpec& arc, const TorusSpec& torus) {
  arc.validate();
  const double outer = arc.radius + arc.thickness_coeff / arc.radius + 1.0;
  const auto amax = static_cast<std::int64_t>(std::ceil(outer));
  const auto bmax = static_cast<std::int64_t>(std::ceil(outer / torus.gamma()));
  std::uint64_t count = 0;
  for (std::int64_t a = -amax; a <= amax; ++a)
    for (std::int64_t b = -bmax; b <= bmax; ++b)
      if (detail::arc_member(a, b, arc, torus)) ++count;
  return count;
}

/// Row-wise enumeration of the ring: O(R) rows with O(1) candidates each.
inline std::uint64_t annulus_arc_count(const ArcSpec& arc, const TorusSpec& torus) {
  arc.validate();
  const double h = arc.thickness_coeff / arc.radius;
  const double r_in = std::max(arc.radius - h, 0.0);
  const double r_out = arc.radius + h;
  const auto bmax = static_cast<std::int64_t>(std::ceil(r_out / torus.gamma())) + 1;
  std::uint64_t count = 0;
  for (std::int64_t b = -bmax; b <= bmax; ++b) {
    const double y = torus.gamma() * static_cast<double>(b);
    const double hi2 = r_out * r_out - y * y;
    if (hi2 < -1e-9 * r_out * r_out) continue;
    const double hi = std::sqrt(std::max(hi2, 0.0));
    const double lo = std::sqrt(std::max(r_in * r_in - y * y, 0.0));
    auto lo_i = static_cast<std::int64_t>(std::ceil(lo)) - 1;
    auto hi_i = static_cast<std::int64_t>(std::floor(hi)) + 1;
    if (lo_i <= 0) {  // the two branches overlap across a = 0
      for (std::int64_t a = -hi_i; a <= hi_i; ++a)
        if (detail::arc_member(a, b, arc, torus)) ++count;
      continue;
    }
    for (std::int64_t a = lo_i; a <= hi_i; ++a) {
      if (detail::arc_member(a, b, arc, torus)) ++count;
      if (detail::arc_member(-a, b, arc, torus)) ++count;
    }
  }
  return count;
}

}  // namespace wnls
