#pragma once

// Discrete space-time norms.
//
// Time Fourier transform convention (unitary):
//   v^(lambda) = (2 pi)^{-1/2} \int v(t) e^{-i lambda t} dt,
// so X^{0,0} is exactly L^2_{t,x}.  For each mode the series is first moved
// to the rotating frame, b(t) = e^{-i Q(n) t} a(n, t), whose transform
// variable is lambda = tau - Q(n); then a length-K DFT gives b^ on
// lambda_j = 2 pi j / (K dt), j in [-K/2, K/2), and
//
//   ||v||^2_{X^{s,b}} = sum_n <n>^{2s} sum_j dlambda <lambda_j>^{2b} |b^(lambda_j)|^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wnls/cutoff.hpp"
#include "wnls/fft.hpp"
#include "wnls/fit.hpp"
#include "wnls/parallel.hpp"
#include "wnls/randomfield.hpp"
#include "wnls/spacetime.hpp"
#include "wnls/wick.hpp"

namespace wnls {

struct XsbParams {
  double s = 0.0;
  double b = 0.0;
};

struct XsbNorm {
  double value = 0.0;
  /// Share of the weighted spectral mass with |lambda| > 0.9 lambda_max; a
  /// large value means the time grid does not resolve the field.
  double edge_fraction = 0.0;
};

inline XsbNorm xsb_norm_detail(const SpaceTimeField& v, XsbParams p, unsigned workers = 1) {
  if (!v.window_applied()) throw std::invalid_argument("xsb_norm: time window not applied");
  const auto& g = v.grid();
  const auto& pts = v.index().points();
  const std::int64_t K = g.K;
  const double dlambda = 2.0 * std::numbers::pi / (static_cast<double>(K) * g.dt);
  const double lambda_max = std::numbers::pi / g.dt;
  const double scale = g.dt * g.dt / (2.0 * std::numbers::pi);

  std::vector<double> lweight(static_cast<std::size_t>(K));
  std::vector<bool> edge(static_cast<std::size_t>(K));
  for (std::int64_t j = 0; j < K; ++j) {
    const std::int64_t jj = j < (K + 1) / 2 ? j : j - K;
    const double lam = static_cast<double>(jj) * dlambda;
    lweight[static_cast<std::size_t>(j)] = std::pow(1.0 + lam * lam, p.b);
    edge[static_cast<std::size_t>(j)] = std::abs(lam) > 0.9 * lambda_max;
  }

  std::vector<double> total(pts.size()), near_edge(pts.size());
  parallel_for(pts.size(), workers, [&](std::size_t i) {
    std::vector<cplx> series(static_cast<std::size_t>(K));
    const double Q = qform(pts[i], v.torus());
    bool any = false;
    for (std::int64_t k = 0; k < K; ++k) {
      const cplx a = v.at(k, i);
      any = any || a != cplx{};
      series[static_cast<std::size_t>(k)] = a * std::polar(1.0, -Q * g.time(k));
    }
    if (!any) return;
    fft_1d(series, true);
    double acc = 0.0, acc_edge = 0.0;
    for (std::size_t j = 0; j < series.size(); ++j) {
      const double w = lweight[j] * std::norm(series[j]);
      acc += w;
      if (edge[j]) acc_edge += w;
    }
    const double nw = std::pow(1.0 + static_cast<double>(norm2(pts[i])), p.s) * dlambda * scale;
    total[i] = nw * acc;
    near_edge[i] = nw * acc_edge;
  });

  XsbNorm r;
  double sum = 0.0, sum_edge = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sum += total[i];
    sum_edge += near_edge[i];
  }
  r.value = std::sqrt(sum);
  r.edge_fraction = sum > 0.0 ? sum_edge / sum : 0.0;
  return r;
}

inline double xsb_norm(const SpaceTimeField& v, XsbParams p, unsigned workers = 1) {
  return xsb_norm_detail(v, p, workers).value;
}

/// Space-time Lebesgue norm with Riemann sum in time and grid mean in space
/// (normalized torus).  Spatial grid side: smallest 7-smooth integer >=
/// oversample (2N + 1); p = 4 is exact for oversample >= 2.  p = inf (pass
/// INFINITY) returns the max over samples.
inline double lp_norm(const SpaceTimeField& v, double p, std::int64_t oversample = 2) {
  const bool inf = std::isinf(p) && p > 0;
  if (!(p == 2.0 || p == 3.0 || p == 4.0 || inf)) throw std::invalid_argument("lp_norm: p must be 2, 3, 4 or inf");
  if (oversample < 2) throw std::invalid_argument("lp_norm: oversample must be >= 2");
  Grid2D grid(smooth_size(oversample * (2 * v.N() + 1)));
  double acc = 0.0;
  for (std::int64_t k = 0; k < v.grid().K; ++k) {
    grid.synthesize(v.field_at(k));
    double slice = 0.0;
    for (const auto& z : grid.data()) {
      const double m = std::abs(z);
      slice = inf ? std::max(slice, m) : slice + std::pow(m, p);
    }
    acc = inf ? std::max(acc, slice) : acc + slice / static_cast<double>(grid.data().size());
  }
  return inf ? acc : std::pow(acc * v.grid().dt, 1.0 / p);
}

/// Largest Q(n) on the support of f.
inline double max_qform(const SpectralField& f) {
  double q = 0.0;
  const auto& pts = f.index().points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (f[i] != cplx{}) q = std::max(q, qform(pts[i], f.torus()));
  return q;
}

struct FreeWaveL4 {
  double value = 0.0;  // ||phi_delta(t) e^{itD} f||_{L^4_{t,x}}
  double dt = 0.0;
  std::int64_t samples = 0;
};

/// L^4_{t,x} norm of the windowed free wave phi(t/delta) e^{itD} f, streamed
/// over time.  |u|^4 has time frequencies within [-2 Qmax, 2 Qmax], so the
/// Riemann sum with dt = 2 pi / (2 Qmax + margin / delta) only aliases
/// window Fourier mass beyond margin / delta, which is negligible.  Phases
/// factor as e^{i n1^2 t} e^{i gamma n2^2 t}.
inline FreeWaveL4 free_wave_l4(const SpectralField& f, double delta = 1.0, double margin = 400.0) {
  if (!(delta > 0.0)) throw std::invalid_argument("free_wave_l4: delta must be positive");
  const std::int64_t N = f.N();
  const double gamma = f.torus().gamma();
  FreeWaveL4 r;
  r.dt = 2.0 * std::numbers::pi / (2.0 * max_qform(f) + margin / delta);
  const auto half = static_cast<std::int64_t>(std::floor(delta / r.dt));
  r.samples = 2 * half + 1;

  CubicWorkspace ws(N);
  SpectralField u(N, f.torus());
  const auto& pts = f.index().points();
  std::vector<cplx> p1(static_cast<std::size_t>(2 * N + 1)), p2(static_cast<std::size_t>(2 * N + 1));
  double acc = 0.0;
  for (std::int64_t k = -half; k <= half; ++k) {
    const double t = static_cast<double>(k) * r.dt;
    const double w = cutoff(t, delta);
    if (w == 0.0) continue;
    for (std::int64_t m = 0; m <= N; ++m) {
      const auto idx = static_cast<std::size_t>(m + N), ridx = static_cast<std::size_t>(N - m);
      p1[idx] = p1[ridx] = std::polar(1.0, static_cast<double>(m * m) * t);
      p2[idx] = p2[ridx] = std::polar(1.0, gamma * static_cast<double>(m * m) * t);
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
      u[i] = f[i] * p1[static_cast<std::size_t>(pts[i].n1 + N)] * p2[static_cast<std::size_t>(pts[i].n2 + N)];
    const double w2 = w * w;
    acc += w2 * w2 * ws.l4_mean(u);
  }
  r.value = std::pow(acc * r.dt, 0.25);
  return r;
}

/// Flat data a_n = |B|^{-1/2} on the ball of radius N.
inline SpectralField flat_data(std::int64_t N, const TorusSpec& torus) {
  SpectralField f(N, torus);
  const double a = 1.0 / std::sqrt(static_cast<double>(f.size()));
  for (auto& c : f.coeffs()) c = a;
  return f;
}

struct StrichartzScan {
  std::vector<std::int64_t> N_list;
  std::vector<std::vector<double>> random_ratios;  // [N][seed]
  std::vector<double> random_max;
  std::vector<double> flat_ratio;
  FitResult random_fit;  // max-over-seeds ratio vs N
  FitResult flat_fit;
};

/// Ratio ||phi(t) e^{itD} f||_{L^4_{t,x}} / ||f||_{L^2} for random and flat data.
inline double strichartz_ratio(const SpectralField& f, double margin = 400.0) {
  const double m = std::sqrt(mass(f));
  if (m == 0.0) throw std::invalid_argument("strichartz_ratio: zero data");
  return free_wave_l4(f, 1.0, margin).value / m;
}

inline StrichartzScan strichartz_scan(const std::vector<std::int64_t>& N_list, const std::vector<std::uint64_t>& seeds,
                                      const TorusSpec& torus, unsigned workers = 1) {
  if (N_list.size() < 2 || seeds.empty()) throw std::invalid_argument("strichartz_scan: need >= 2 scales and >= 1 seed");
  StrichartzScan s;
  s.N_list = N_list;
  std::vector<std::pair<double, double>> rnd, flat;
  for (auto N : N_list) {
    std::vector<double> ratios(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t i) {
      ratios[i] = strichartz_ratio(sample_data({seeds[i], torus}, N));
    });
    s.random_max.push_back(*std::max_element(ratios.begin(), ratios.end()));
    s.flat_ratio.push_back(strichartz_ratio(flat_data(N, torus)));
    rnd.emplace_back(static_cast<double>(N), s.random_max.back());
    flat.emplace_back(static_cast<double>(N), s.flat_ratio.back());
    s.random_ratios.push_back(std::move(ratios));
  }
  s.random_fit = fit_exponent(rnd);
  s.flat_fit = fit_exponent(flat);
  return s;
}

enum class TlocVariant { xsb, l4 };

struct TlocScan {
  TlocVariant variant = TlocVariant::xsb;
  std::vector<double> delta_list;
  std::vector<double> values;
  FitResult fit;  // value vs delta
};

/// Windowed free wave phi_delta(t) e^{itD} f on [-2 delta, 2 delta] with K samples.
inline SpaceTimeField windowed_free_wave(const SpectralField& f, double delta, std::int64_t K) {
  return SpaceTimeField::free_wave(f, TimeGrid::symmetric(2.0 * delta, K),
                                   [delta](double t) { return cutoff(t, delta); });
}

/// Norm of phi_delta e^{itD} f across delta: X^{s,b} (K samples per window)
/// or L^4_{t,x}, with the log-log fit of value against delta.
inline TlocScan time_localization_scan(const std::vector<double>& delta_list, TlocVariant variant, const SpectralField& f,
                                       XsbParams p = {}, std::int64_t K = 1025) {
  if (delta_list.size() < 2) throw std::invalid_argument("time_localization_scan: need >= 2 deltas");
  for (std::size_t i = 0; i < delta_list.size(); ++i)
    if (!(delta_list[i] > 0.0) || (i > 0 && !(delta_list[i] < delta_list[i - 1])))
      throw std::invalid_argument("time_localization_scan: deltas must be positive and decreasing");
  TlocScan s;
  s.variant = variant;
  s.delta_list = delta_list;
  std::vector<std::pair<double, double>> pts;
  for (double d : delta_list) {
    const double v = variant == TlocVariant::xsb ? xsb_norm(windowed_free_wave(f, d, K), p) : free_wave_l4(f, d).value;
    s.values.push_back(v);
    pts.emplace_back(d, v);
  }
  s.fit = fit_exponent(pts);
  return s;
}

}  // namespace wnls
