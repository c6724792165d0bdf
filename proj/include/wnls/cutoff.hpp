#pragma once

// Smooth time cutoff phi: 1 on [-1/2, 1/2], 0 outside [-1, 1].
//
//   psi(x)  = exp(-1/x) for x > 0, else 0
//   step(x) = psi(x) / (psi(x) + psi(1 - x))          (0 -> 1 on [0, 1])
//   phi(t)  = step(2 (1 - |t|))
//
// phi_delta(t) = phi(t / delta).

#include <cmath>

namespace wnls {

namespace detail {
inline double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
}  // namespace detail

inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = detail::psi(x), b = detail::psi(1.0 - x);
  return a / (a + b);
}

inline double cutoff(double t) { return smooth_step(2.0 * (1.0 - std::abs(t))); }

inline double cutoff(double t, double delta) { return cutoff(t / delta); }

}  // namespace wnls
