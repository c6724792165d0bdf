#pragma once

// Gaussian random data u0 = sum_{0 < |n| <= N} g_n / |n| e^{i n.x} and Monte
// Carlo checks of the Gaussian tail and sup-norm estimates.
//
// g_n depends only on (seed, n), so the data at N is the restriction of the
// data at 2N.  The zero mode is left at 0: the weight 1/|n| is undefined there.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wnls/fft.hpp"
#include "wnls/field.hpp"
#include "wnls/fit.hpp"
#include "wnls/parallel.hpp"
#include "wnls/rng.hpp"

namespace wnls {

struct GaussianEnsemble {
  std::uint64_t seed = 0;
  TorusSpec torus{};
  std::string prng_id = kPrngId;

  /// Stream 0 of the counter space is reserved for initial data.
  cplx g(const FreqIndex& n) const {
    return complex_gaussian(seed, static_cast<std::uint32_t>(n.n1), static_cast<std::uint32_t>(n.n2), 0u);
  }
};

inline SpectralField sample_data(const GaussianEnsemble& ens, std::int64_t N) {
  SpectralField u(N, ens.torus);
  const auto& pts = u.index().points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (norm2(pts[i]) > 0) u[i] = ens.g(pts[i]) / euclid(pts[i]);
  return u;
}

/// sum_{0 < |n| <= N} 1/|n|^2, the expected mass of the random data.
inline double expected_mass(std::int64_t N) {
  double s = 0.0;
  for (const auto& n : ball(N).points())
    if (norm2(n) > 0) s += 1.0 / static_cast<double>(norm2(n));
  return s;
}

struct SupNorm {
  double value = 0.0;  // max modulus over the sampling grid
  double pad = 0.0;    // true sup <= value + pad
  std::int64_t grid = 0;
};

/// Max of |u| on an M x M grid, M the smallest 7-smooth integer >=
/// oversample (2N + 1) (fast transform sizes).  Every point of the
/// torus lies within h/sqrt(2) of a node (h = 2 pi / M) and |grad u| <=
/// sum |n| |a_n|, which gives the pad.
inline SupNorm sup_norm(const SpectralField& u, std::int64_t oversample) {
  if (oversample < 2) throw std::invalid_argument("sup_norm: oversample must be >= 2");
  SupNorm r;
  r.grid = smooth_size(oversample * (2 * u.N() + 1));
  Grid2D grid(r.grid);
  grid.synthesize(u);
  for (const auto& z : grid.data()) r.value = std::max(r.value, std::abs(z));
  double lip = 0.0;
  const auto& pts = u.index().points();
  for (std::size_t i = 0; i < pts.size(); ++i) lip += euclid(pts[i]) * std::abs(u[i]);
  r.pad = (2.0 * std::numbers::pi / static_cast<double>(r.grid)) / std::numbers::sqrt2 * lip;
  return r;
}

/// Linear-interpolated empirical quantile of unsorted data.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct LinfScan {
  std::vector<std::int64_t> N_list;
  std::vector<std::vector<double>> values;  // [N][seed]
  std::vector<double> median, p99;
  FitResult median_fit, p99_fit;
  FitResult median_fit_lower, median_fit_upper;  // lower / upper dyadic halves
};

inline LinfScan linf_scan(const std::vector<std::uint64_t>& seeds, const std::vector<std::int64_t>& N_list,
                          const TorusSpec& torus, std::int64_t oversample = 4, unsigned workers = 1) {
  if (N_list.size() < 2 || seeds.empty()) throw std::invalid_argument("linf_scan: need >= 2 scales and >= 1 seed");
  LinfScan s;
  s.N_list = N_list;
  std::vector<std::pair<double, double>> med, top;
  for (auto N : N_list) {
    std::vector<double> vals(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t i) {
      vals[i] = sup_norm(sample_data({seeds[i], torus}, N), oversample).value;
    });
    s.median.push_back(quantile(vals, 0.5));
    s.p99.push_back(quantile(vals, 0.99));
    med.emplace_back(static_cast<double>(N), s.median.back());
    top.emplace_back(static_cast<double>(N), s.p99.back());
    s.values.push_back(std::move(vals));
  }
  s.median_fit = fit_exponent(med);
  s.p99_fit = fit_exponent(top);
  const std::size_t half = (med.size() + 1) / 2;
  s.median_fit_lower = fit_exponent({med.begin(), med.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(half, 2))});
  s.median_fit_upper = fit_exponent({med.end() - static_cast<std::ptrdiff_t>(std::max<std::size_t>(half, 2)), med.end()});
  return s;
}

/// Dense order-k coefficient tensor over m Gaussians, c[i1 * m^{k-1} + ... + ik].
struct ChaosTensor {
  int k = 1;
  std::size_t m = 0;
  std::vector<cplx> c;

  void validate() const {
    if (k < 1 || k > 3) throw std::invalid_argument("ChaosTensor: order must be 1, 2 or 3");
    std::size_t size = 1;
    for (int i = 0; i < k; ++i) size *= m;
    if (m == 0 || c.size() != size) throw std::invalid_argument("ChaosTensor: size mismatch");
    for (const auto& z : c)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::invalid_argument("ChaosTensor: non-finite coefficient");
  }

  /// F = sum c_{i} g_{i1} ... g_{ik}.
  cplx evaluate(const std::vector<cplx>& g) const {
    if (k == 1) {
      cplx s{};
      for (std::size_t i = 0; i < m; ++i) s += c[i] * g[i];
      return s;
    }
    cplx s{};
    const std::size_t stride = k == 2 ? m : m * m;
    for (std::size_t i = 0; i < m; ++i) {
      cplx inner_sum{};
      const cplx* row = c.data() + i * stride;
      if (k == 2) {
        for (std::size_t j = 0; j < m; ++j) inner_sum += row[j] * g[j];
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          cplx t{};
          for (std::size_t l = 0; l < m; ++l) t += row[j * m + l] * g[l];
          inner_sum += t * g[j];
        }
      }
      s += g[i] * inner_sum;
    }
    return s;
  }

  /// ||F||_{L^2(Omega)}^2 = k! sum |Sym c|^2 for independent standard complex Gaussians.
  double l2_norm() const {
    double acc = 0.0;
    if (k == 1) {
      for (const auto& z : c) acc += std::norm(z);
      return std::sqrt(acc);
    }
    if (k == 2) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) acc += std::norm(0.5 * (c[i * m + j] + c[j * m + i]));
      return std::sqrt(2.0 * acc);
    }
    auto at = [&](std::size_t a, std::size_t b, std::size_t d) { return c[(a * m + b) * m + d]; };
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) {
          const cplx sym = (at(i, j, l) + at(i, l, j) + at(j, i, l) + at(j, l, i) + at(l, i, j) + at(l, j, i)) / 6.0;
          acc += std::norm(sym);
        }
    return std::sqrt(6.0 * acc);
  }
};

/// Reference order-2 tensor c_{mn} = 1/(|m||n|) over 0 < |m|, |n| <= R, zero diagonal.
inline ChaosTensor reference_tensor_k2(std::int64_t R) {
  std::vector<double> w;
  for (const auto& n : ball(R).points())
    if (norm2(n) > 0) w.push_back(1.0 / euclid(n));
  ChaosTensor t{2, w.size(), std::vector<cplx>(w.size() * w.size())};
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      if (i != j) t.c[i * w.size() + j] = w[i] * w[j];
  return t;
}

struct TailReport {
  int k = 1;
  std::vector<double> lambda_grid;
  std::vector<double> empirical_tail;
  std::vector<double> standard_error;
  double l2_norm = 0.0;
  double bound_constant = 0.0;  // configured K
  std::vector<double> bound;    // exp(1 - lambda^{2/k} / (K ||F||^{2/k}))
  double calibrated_K = 0.0;    // smallest K keeping the empirical tail under the curve
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

inline double tail_bound(double lambda, int k, double K, double l2) {
  return std::exp(1.0 - std::pow(lambda, 2.0 / k) / (K * std::pow(l2, 2.0 / k)));
}

/// Monte Carlo tail of |F_k|.  Trial t draws g_i = gaussian(seed; i, t, stream 1).
inline TailReport chaos_tail(const ChaosTensor& F, const std::vector<double>& lambda_grid, std::uint64_t trials,
                             std::uint64_t seed, double K = 4.0, unsigned workers = 1) {
  F.validate();
  if (trials == 0) throw std::invalid_argument("chaos_tail: trials must be positive");
  for (double l : lambda_grid)
    if (!(l >= 0.0)) throw std::invalid_argument("chaos_tail: thresholds must be nonnegative");
  TailReport r;
  r.k = F.k;
  r.lambda_grid = lambda_grid;
  r.trials = trials;
  r.seed = seed;
  r.bound_constant = K;
  r.l2_norm = F.l2_norm();

  std::vector<double> mod(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    std::vector<cplx> g(F.m);
    for (std::size_t i = 0; i < F.m; ++i)
      g[i] = complex_gaussian(seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t), 1u);
    mod[t] = std::abs(F.evaluate(g));
  });
  std::sort(mod.begin(), mod.end());
  const double n = static_cast<double>(trials);
  for (double l : lambda_grid) {
    const auto above = static_cast<double>(mod.end() - std::upper_bound(mod.begin(), mod.end(), l));
    const double p = above / n;
    r.empirical_tail.push_back(p);
    r.standard_error.push_back(std::sqrt(p * (1.0 - p) / n));
    r.bound.push_back(tail_bound(l, F.k, K, r.l2_norm));
    // p <= exp(1 - x/K)  <=>  K >= x / (1 - ln p) whenever p > 0.
    if (p > 0.0 && l > 0.0) {
      const double x = std::pow(l, 2.0 / F.k) / std::pow(r.l2_norm, 2.0 / F.k);
      r.calibrated_K = std::max(r.calibrated_K, x / (1.0 - std::log(p)));
    }
  }
  return r;
}

}  // namespace wnls
