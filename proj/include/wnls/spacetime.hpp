#pragma once

// Coefficients a(n, t_k) on a uniform time grid t_k = t0 + k dt.  Storage is
// time-major: the K slices are SpectralField-shaped blocks of ball(N).size().

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wnls/cutoff.hpp"
#include "wnls/field.hpp"

namespace wnls {

struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::int64_t K = 0;

  double time(std::int64_t k) const { return t0 + static_cast<double>(k) * dt; }

  /// Odd number of samples symmetric about 0 covering [-half_width, half_width].
  static TimeGrid symmetric(double half_width, std::int64_t K) {
    if (K < 3 || K % 2 == 0) throw std::invalid_argument("TimeGrid: need an odd sample count >= 3");
    if (!(half_width > 0.0)) throw std::invalid_argument("TimeGrid: half width must be positive");
    const double dt = 2.0 * half_width / static_cast<double>(K - 1);
    return {-half_width, dt, K};
  }

  std::int64_t center() const { return K / 2; }
};

class SpaceTimeField {
 public:
  SpaceTimeField(std::int64_t N, TorusSpec torus, TimeGrid grid, bool window_applied = false)
      : N_(N), torus_(torus), grid_(grid), modes_(ball(N).size()), window_applied_(window_applied),
        data_(static_cast<std::size_t>(grid.K) * ball(N).size()) {
    if (grid.K < 2 || !(grid.dt > 0.0)) throw std::invalid_argument("SpaceTimeField: invalid time grid");
  }

  /// a(n, t) = w(t) e^{i Q(n) t} f_n.
  static SpaceTimeField free_wave(const SpectralField& f, TimeGrid grid, const std::function<double(double)>& w,
                                  bool window_applied = true) {
    SpaceTimeField v(f.N(), f.torus(), grid, window_applied);
    const auto& pts = f.index().points();
    for (std::int64_t k = 0; k < grid.K; ++k) {
      const double t = grid.time(k);
      const double wt = w(t);
      cplx* row = v.slice(k);
      for (std::size_t i = 0; i < pts.size(); ++i) row[i] = wt * std::polar(1.0, qform(pts[i], f.torus()) * t) * f[i];
    }
    return v;
  }

  std::int64_t N() const { return N_; }
  const TorusSpec& torus() const { return torus_; }
  const TimeGrid& grid() const { return grid_; }
  std::size_t modes() const { return modes_; }
  const BallIndex& index() const { return ball(N_); }
  bool window_applied() const { return window_applied_; }
  void set_window_applied(bool v) { window_applied_ = v; }

  cplx* slice(std::int64_t k) { return data_.data() + static_cast<std::size_t>(k) * modes_; }
  const cplx* slice(std::int64_t k) const { return data_.data() + static_cast<std::size_t>(k) * modes_; }
  cplx& at(std::int64_t k, std::size_t i) { return slice(k)[i]; }
  const cplx& at(std::int64_t k, std::size_t i) const { return slice(k)[i]; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  SpectralField field_at(std::int64_t k) const {
    SpectralField u(N_, torus_);
    std::copy(slice(k), slice(k) + modes_, u.coeffs().begin());
    return u;
  }

  void set_slice(std::int64_t k, const SpectralField& u) {
    if (u.N() != N_) throw std::invalid_argument("SpaceTimeField: slice radius mismatch");
    std::copy(u.coeffs().begin(), u.coeffs().end(), slice(k));
  }

  /// Largest |a| on the first and last slices relative to the global max.
  double edge_ratio() const {
    double edge = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < modes_; ++i) edge = std::max({edge, std::abs(at(0, i)), std::abs(at(grid_.K - 1, i))});
    for (const auto& z : data_) peak = std::max(peak, std::abs(z));
    return peak == 0.0 ? 0.0 : edge / peak;
  }

  bool all_finite() const {
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

 private:
  std::int64_t N_;
  TorusSpec torus_;
  TimeGrid grid_;
  std::size_t modes_;
  bool window_applied_;
  std::vector<cplx> data_;
};

/// Riemann-sum L^2_{t,x} norm: (sum_k dt sum_n |a(n,t_k)|^2)^{1/2}.
inline double l2_tx(const SpaceTimeField& v) {
  double acc = 0.0;
  for (const auto& z : v.data()) acc += std::norm(z);
  return std::sqrt(acc * v.grid().dt);
}

/// L^2_{t,x} norm of the difference of two fields on the same grid.
inline double l2_tx_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.data().size() != b.data().size()) throw std::invalid_argument("l2_tx_distance: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) acc += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(acc * a.grid().dt);
}

}  // namespace wnls
