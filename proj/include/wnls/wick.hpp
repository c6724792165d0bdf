#pragma once

// The Wick-ordered nonlinearity
//
//   N(f, g, h)_n = sum_{n1 - n2 + n3 = n, n2 != n1, n2 != n3} f_{n1} conj(g_{n2}) h_{n3}
//                  - f_n conj(g_n) h_n
//
// Resolving the exclusions gives the pointwise form
//
//   N(f, g, h) = f conj(g) h - <f, g> h - <h, g> f,     <f, g> = sum f_n conj(g_n),
//
// so N(u, u, u) = |u|^2 u - 2 mass(u) u.  wick_oracle evaluates the lattice
// sum directly; wick_fast evaluates the pointwise form on an alias-free grid.

#include <cstdint>

#include "wnls/fft.hpp"
#include "wnls/field.hpp"

namespace wnls {

/// Direct triple sum.  The output lives on the ball of radius out_radius
/// (defaults to N, i.e. P_{<=N} applied); pass 3N to see the full output.
inline SpectralField wick_oracle(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                                 std::int64_t out_radius = 0) {
  require_compatible(f, g);
  require_compatible(f, h);
  if (out_radius <= 0) out_radius = f.N();
  SpectralField out(out_radius, f.torus());
  const auto& pts = f.index().points();
  const auto& oidx = out.index();
  const std::size_t m = pts.size();
  for (std::size_t i1 = 0; i1 < m; ++i1) {
    if (f[i1] == cplx{}) continue;
    for (std::size_t i2 = 0; i2 < m; ++i2) {
      if (i2 == i1 || g[i2] == cplx{}) continue;
      const cplx fg = f[i1] * std::conj(g[i2]);
      const FreqIndex shift = pts[i1] - pts[i2];
      for (std::size_t i3 = 0; i3 < m; ++i3) {
        if (i3 == i2) continue;
        const auto k = oidx.find(shift + pts[i3]);
        if (k >= 0) out[static_cast<std::size_t>(k)] += fg * h[i3];
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = oidx.find(pts[i]);
    if (k >= 0) out[static_cast<std::size_t>(k)] -= f[i] * std::conj(g[i]) * h[i];
  }
  return out;
}

/// Reusable grids for cubic products of fields on one ball.
class CubicWorkspace {
 public:
  explicit CubicWorkspace(std::int64_t N) : N_(N), a_(cubic_grid(N)), b_(cubic_grid(N)), c_(cubic_grid(N)) {}

  std::int64_t N() const { return N_; }
  std::int64_t side() const { return a_.side(); }

  /// P_{<=N}(f conj(g) h), alias-free.
  void product(const SpectralField& f, const SpectralField& g, const SpectralField& h, SpectralField& out) {
    a_.synthesize(f);
    b_.synthesize(g);
    c_.synthesize(h);
    auto& A = a_.data();
    const auto& B = b_.data();
    const auto& C = c_.data();
    for (std::size_t j = 0; j < A.size(); ++j) A[j] *= std::conj(B[j]) * C[j];
    a_.analyze(out);
  }

  /// P_{<=N}(|u|^2 u) with a single synthesis.
  void cubic(const SpectralField& u, SpectralField& out) {
    a_.synthesize(u);
    for (auto& z : a_.data()) z *= std::norm(z);
    a_.analyze(out);
  }

  /// Mean over the torus of |u|^4; exact because |u|^2 has degree 2N < L/2.
  double l4_mean(const SpectralField& u) {
    a_.synthesize(u);
    double acc = 0.0;
    for (const auto& z : a_.data()) {
      const double r = std::norm(z);
      acc += r * r;
    }
    return acc / static_cast<double>(a_.data().size());
  }

 private:
  std::int64_t N_;
  Grid2D a_, b_, c_;
};

inline SpectralField wick_fast(const SpectralField& f, const SpectralField& g, const SpectralField& h) {
  require_compatible(f, g);
  require_compatible(f, h);
  CubicWorkspace ws(f.N());
  SpectralField out(f.N(), f.torus());
  if (&f == &g && &g == &h) {
    ws.cubic(f, out);
  } else {
    ws.product(f, g, h, out);
  }
  const cplx fg = inner(f, g), hg = inner(h, g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= fg * h[i] + hg * f[i];
  return out;
}

inline SpectralField wick(const SpectralField& u) { return wick_fast(u, u, u); }

}  // namespace wnls
