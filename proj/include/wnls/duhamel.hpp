#pragma once

// The time-localized Duhamel map
//
//   Gamma(u)(t) = i phi_delta(t) \int_0^t e^{i(t-s)D} P_{<=N} N(phi_delta(s) u(s)) ds
//
// and Picard iteration of w -> Gamma(phi_delta e^{itD} u0 + w).
//
// Per mode the integral is taken in the rotating frame,
//   w_n(t) = i phi_delta(t) e^{i Q t} \int_0^t e^{-i Q s} N_n(s) ds,
// with a fourth-order cumulative rule on a symmetric grid (t = 0 is a node):
//   interior step  dt/24 (-g_{k-1} + 13 g_k + 13 g_{k+1} - g_{k+2}),
//   at the far grid edges the one-sided dt/24 (9, 19, -5, 1) weights.
// N is the Wick nonlinearity of the argument at each time, |f|^2 f - 2 mass(f) f.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wnls/cutoff.hpp"
#include "wnls/norms.hpp"
#include "wnls/spacetime.hpp"
#include "wnls/wick.hpp"

namespace wnls {

struct DuhamelOptions {
  double min_samples_per_delta = 64.0;
};

namespace detail {

inline void check_duhamel_grid(const TimeGrid& g, double delta, const DuhamelOptions& opt) {
  if (!(delta > 0.0)) throw std::invalid_argument("gamma_map: delta must be positive");
  if (g.K < 7 || g.K % 2 == 0 || std::abs(g.time(g.center())) > 1e-12 * delta)
    throw std::invalid_argument("gamma_map: grid must be symmetric with t = 0 as its center node");
  const double tol = 1e-9 * delta;
  if (g.time(0) > -2.0 * delta + tol || g.time(g.K - 1) < 2.0 * delta - tol)
    throw std::invalid_argument("gamma_map: grid must cover [-2 delta, 2 delta]");
  if (delta / g.dt < opt.min_samples_per_delta)
    throw std::invalid_argument("gamma_map: fewer than the minimum samples per unit delta");
}

}  // namespace detail

/// Streamed Duhamel map: input(k, out) writes the argument at t_k into out;
/// the result is written slice by slice into `result` (same grid and N).
inline void gamma_map_stream(const std::function<void(std::int64_t, SpectralField&)>& input, double delta,
                             SpaceTimeField& result, DuhamelOptions opt = {}) {
  const TimeGrid g = result.grid();
  detail::check_duhamel_grid(g, delta, opt);
  const std::int64_t N = result.N();
  const auto& pts = result.index().points();
  const std::size_t m = pts.size();
  const auto& torus = result.torus();
  CubicWorkspace ws(N);
  SpectralField f(N, torus), nl(N, torus);
  std::vector<double> Q(m);
  for (std::size_t i = 0; i < m; ++i) Q[i] = qform(pts[i], torus);

  // Rotating-frame integrand, zero wherever the cutoff vanishes.
  auto integrand = [&](std::int64_t k, std::vector<cplx>& out) {
    out.assign(m, cplx{});
    if (k < 0 || k >= g.K) return;
    const double t = g.time(k);
    const double w = cutoff(t, delta);
    if (w == 0.0) return;
    input(k, f);
    for (auto& c : f.coeffs()) c *= w;
    ws.cubic(f, nl);
    const double M = 2.0 * mass(f);
    for (std::size_t i = 0; i < m; ++i) out[i] = std::polar(1.0, -Q[i] * t) * (nl[i] - M * f[i]);
  };

  const std::int64_t c = g.center();
  const cplx I{0.0, 1.0};
  auto emit = [&](std::int64_t k, const std::vector<cplx>& acc) {
    const double t = g.time(k);
    const double w = cutoff(t, delta);
    cplx* row = result.slice(k);
    for (std::size_t i = 0; i < m; ++i) row[i] = w == 0.0 ? cplx{} : I * w * std::polar(1.0, Q[i] * t) * acc[i];
  };

  // March away from t = 0 in direction dir.  win[j] holds g at k + (j - 2) dir.
  auto march = [&](int dir) {
    std::vector<cplx> acc(m, cplx{});
    std::deque<std::vector<cplx>> win;
    for (int j = -2; j <= 2; ++j) {
      win.emplace_back();
      integrand(c + j * dir, win.back());
    }
    if (dir > 0) emit(c, acc);
    const double h = static_cast<double>(dir) * g.dt / 24.0;
    for (std::int64_t k = c; k + dir >= 0 && k + dir < g.K; k += dir) {
      const bool interior = k + 2 * dir >= 0 && k + 2 * dir < g.K;
      for (std::size_t i = 0; i < m; ++i) {
        acc[i] += interior ? h * (-win[1][i] + 13.0 * win[2][i] + 13.0 * win[3][i] - win[4][i])
                           : h * (9.0 * win[3][i] + 19.0 * win[2][i] - 5.0 * win[1][i] + win[0][i]);
      }
      emit(k + dir, acc);
      win.pop_front();
      win.emplace_back();
      integrand(k + 3 * dir, win.back());
    }
  };
  march(+1);
  march(-1);
  result.set_window_applied(true);
}

inline SpaceTimeField gamma_map(const SpaceTimeField& input, double delta, std::int64_t N, DuhamelOptions opt = {}) {
  if (input.N() != N) throw std::invalid_argument("gamma_map: input radius differs from N");
  SpaceTimeField out(N, input.torus(), input.grid(), true);
  gamma_map_stream([&](std::int64_t k, SpectralField& f) { std::copy(input.slice(k), input.slice(k) + input.modes(), f.coeffs().begin()); },
                   delta, out, opt);
  return out;
}

/// Default proof parameters: s0 = 0.1, b0 = 1/2 + eps0 with eps0 = 0.01.
struct PicardOptions {
  double s0 = 0.1;
  double b0 = 0.51;
  int max_iter = 30;
  double tolerance = 1e-10;        // stop once the X^{s0,b0} difference is below this
  double divergence_ratio = 10.0;  // flag divergence above this contraction ratio
  std::int64_t samples_per_delta = 512;
  DuhamelOptions duhamel{};
};

struct PicardRun {
  double delta = 0.0;
  double s0 = 0.0, b0 = 0.0;
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  std::vector<double> iterate_norms;  // ||w_k||_{X^{s0,b0}}, k = 0, 1, ...
  std::vector<double> diff_norms;     // ||w_{k+1} - w_k||_{X^{s0,b0}}
  std::vector<double> ratios;         // diff_norms[k] / diff_norms[k - 1]
  double residual = 0.0;              // ||w - Gamma(v0 + w)||_{L^2_{t,x}} of the returned w
  bool converged = false;
  bool diverged = false;
  std::optional<SpaceTimeField> w;    // final iterate
};

/// Symmetric grid over [-2 delta, 2 delta] with samples_per_delta steps per unit delta.
inline TimeGrid picard_grid(double delta, std::int64_t samples_per_delta) {
  return TimeGrid::symmetric(2.0 * delta, 4 * samples_per_delta + 1);
}

inline PicardRun picard(const SpectralField& u0, double delta, PicardOptions opt = {}) {
  const std::int64_t N = u0.N();
  const TimeGrid grid = picard_grid(delta, opt.samples_per_delta);
  const auto& pts = u0.index().points();
  PicardRun run;
  run.delta = delta;
  run.s0 = opt.s0;
  run.b0 = opt.b0;
  run.N = N;
  const XsbParams xp{opt.s0, opt.b0};

  SpaceTimeField w(N, u0.torus(), grid, true);  // w_0 = 0
  run.iterate_norms.push_back(0.0);
  auto diff_norms = [&](const SpaceTimeField& a, const SpaceTimeField& b, double& l2) {
    SpaceTimeField d(N, u0.torus(), grid, true);
    for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] = a.data()[i] - b.data()[i];
    l2 = l2_tx(d);
    return xsb_norm(d, xp);
  };

  for (int it = 0; it < opt.max_iter; ++it) {
    SpaceTimeField next(N, u0.torus(), grid, true);
    gamma_map_stream(
        [&](std::int64_t k, SpectralField& f) {
          const double t = grid.time(k);
          const double phi = cutoff(t, delta);
          const cplx* wk = w.slice(k);
          for (std::size_t i = 0; i < pts.size(); ++i)
            f[i] = phi * std::polar(1.0, qform(pts[i], u0.torus()) * t) * u0[i] + wk[i];
        },
        delta, next, opt.duhamel);
    double l2 = 0.0;
    const double d = diff_norms(next, w, l2);
    run.diff_norms.push_back(d);
    run.iterate_norms.push_back(xsb_norm(next, xp));
    if (run.diff_norms.size() >= 2) {
      const double prev = run.diff_norms[run.diff_norms.size() - 2];
      const double ratio = prev > 0.0 ? d / prev : 0.0;
      run.ratios.push_back(ratio);
      if (ratio > opt.divergence_ratio) {
        run.diverged = true;
        run.residual = l2;
        run.w = std::move(w);
        return run;
      }
    }
    // next = Gamma(v0 + w), so l2 is the fixed-point residual of w.
    run.residual = l2;
    if (d < opt.tolerance) {
      run.converged = true;
      run.w = std::move(w);
      return run;
    }
    w = std::move(next);
  }
  run.w = std::move(w);
  return run;
}

}  // namespace wnls
