#pragma once

// Fourier coefficients on the truncation ball |n| <= N.  Coefficients are
// stored in the lexicographic order of BallIndex; the origin has a slot
// (zero for the random data, but the projected flow may populate it).

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wnls/torus.hpp"

namespace wnls {

using cplx = std::complex<double>;

class SpectralField {
 public:
  SpectralField(std::int64_t N, TorusSpec torus) : N_(N), torus_(torus), coeffs_(ball(N).size()) {
    if (N < 1) throw std::invalid_argument("SpectralField: N must be >= 1");
  }

  std::int64_t N() const { return N_; }
  const TorusSpec& torus() const { return torus_; }
  const BallIndex& index() const { return ball(N_); }
  std::size_t size() const { return coeffs_.size(); }

  std::vector<cplx>& coeffs() { return coeffs_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }

  /// Coefficient at n, zero outside the ball.
  cplx at(const FreqIndex& n) const {
    const auto i = index().find(n);
    return i < 0 ? cplx{} : coeffs_[static_cast<std::size_t>(i)];
  }

  void set(const FreqIndex& n, cplx v) {
    const auto i = index().find(n);
    if (i < 0) throw std::out_of_range("SpectralField::set: frequency outside the ball");
    coeffs_[static_cast<std::size_t>(i)] = v;
  }

  /// Restriction to (or zero extension onto) the ball of radius M.
  SpectralField resized(std::int64_t M) const {
    SpectralField out(M, torus_);
    const auto& pts = out.index().points();
    for (std::size_t i = 0; i < pts.size(); ++i) out.coeffs_[i] = at(pts[i]);
    return out;
  }

 private:
  std::int64_t N_;
  TorusSpec torus_;
  std::vector<cplx> coeffs_;
};

inline void require_compatible(const SpectralField& a, const SpectralField& b) {
  if (a.N() != b.N() || !(a.torus() == b.torus()))
    throw std::invalid_argument("fields differ in N or gamma");
}

/// sum |a_n|^2 (normalized torus measure).
inline double mass(const SpectralField& u) {
  double m = 0.0;
  for (const auto& c : u.coeffs()) m += std::norm(c);
  return m;
}

/// sum_n f_n conj(g_n).
inline cplx inner(const SpectralField& f, const SpectralField& g) {
  require_compatible(f, g);
  cplx s{};
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s;
}

/// Free Schrodinger flow a_n -> a_n exp(i Q(n) t).
inline SpectralField propagate(const SpectralField& u, double t) {
  SpectralField out = u;
  const auto& pts = u.index().points();
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = u[i] * std::polar(1.0, qform(pts[i], u.torus()) * t);
  return out;
}

/// Sobolev norm with weight <n>^{2s}, <n> = sqrt(1 + |n|^2).
inline double sobolev_norm(const SpectralField& u, double s) {
  const auto& pts = u.index().points();
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    acc += std::pow(1.0 + static_cast<double>(norm2(pts[i])), s) * std::norm(u[i]);
  return std::sqrt(acc);
}

}  // namespace wnls
