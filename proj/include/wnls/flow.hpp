#pragma once

// Truncated Wick-ordered flow on the frequency side,
//
//   a_n' = i (Q(n) a_n + P_{<=N}[|u|^2 u]_n - M_N a_n),    M_N = 2 mass(u0),
//
// which is the mild formulation with phase exp(+i Q t).  It is Hamiltonian,
// a' = i dH/d(conj a), with
//
//   H = sum Q |a|^2 + 1/2 mean|u|^4 - M_N sum |a|^2,
//
// so both mass and H are conserved.  The stepper is integrating-factor RK4
// (Lawson): the linear phase is applied exactly and RK4 integrates the
// nonlinear part in the rotating frame.
//
// Schemes:
//   rk4-if  explicit Lawson RK4 (the reference scheme);
//   gl4-if  Lawson transform of the two-stage Gauss-Legendre method.  It is
//           implicit (stages solved by fixed-point iteration), symplectic and
//           conserves every quadratic invariant, so mass is kept to the
//           stage-solve tolerance rather than to O(dt^4).

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wnls/field.hpp"
#include "wnls/wick.hpp"

namespace wnls {

inline constexpr const char* kSchemeRk4If = "rk4-if";
inline constexpr const char* kSchemeGl4If = "gl4-if";

inline double energy(const SpectralField& u, double M, CubicWorkspace& ws) {
  const auto& pts = u.index().points();
  double kinetic = 0.0, m = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = std::norm(u[i]);
    kinetic += qform(pts[i], u.torus()) * r;
    m += r;
  }
  return kinetic + 0.5 * ws.l4_mean(u) - M * m;
}

inline double energy(const SpectralField& u, double M) {
  CubicWorkspace ws(u.N());
  return energy(u, M, ws);
}

struct ConservedSample {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::string scheme_id = kSchemeRk4If;
  double dt = 0.0;
  double M_N = 0.0;
  std::vector<ConservedSample> conserved_log;
};

/// Thrown when the discrete state stops being finite.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double last_finite_time)
      : std::runtime_error("evolve: non-finite state after t = " + std::to_string(last_finite_time)),
        last_finite_time_(last_finite_time) {}
  double last_finite_time() const { return last_finite_time_; }

 private:
  double last_finite_time_;
};

struct EvolveOptions {
  std::int64_t record_every = 1;  // keep every k-th state (first and last always kept)
  bool log_energy = true;
};

/// Right-hand side of the nonlinear part: i (P|u|^2 u - M u).  M is the
/// linear coefficient left after any shift moved into the phase.
class WickRhs {
 public:
  WickRhs(std::int64_t N, double M) : ws_(N), M_(M) {}

  void operator()(const SpectralField& a, SpectralField& out) {
    ws_.cubic(a, out);
    const cplx I{0.0, 1.0};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = I * (out[i] - M_ * a[i]);
  }

  CubicWorkspace& workspace() { return ws_; }
  double M() const { return M_; }

 private:
  CubicWorkspace ws_;
  double M_;
};

/// One Lawson RK4 step with half-step phases E = exp(i Q dt/2).
class LawsonRk4 {
 public:
  LawsonRk4(const SpectralField& shape, double dt, double M)
      : dt_(dt), rhs_(shape.N(), M), E_(shape.size()), k1_(shape), k2_(shape), k3_(shape), k4_(shape), tmp_(shape) {
    const auto& pts = shape.index().points();
    for (std::size_t i = 0; i < pts.size(); ++i) E_[i] = std::polar(1.0, 0.5 * dt * qform(pts[i], shape.torus()));
  }

  void step(SpectralField& a) {
    const double h = dt_;
    const std::size_t m = a.size();
    rhs_(a, k1_);
    for (std::size_t i = 0; i < m; ++i) tmp_[i] = E_[i] * (a[i] + 0.5 * h * k1_[i]);
    rhs_(tmp_, k2_);
    for (std::size_t i = 0; i < m; ++i) tmp_[i] = E_[i] * a[i] + 0.5 * h * k2_[i];
    rhs_(tmp_, k3_);
    for (std::size_t i = 0; i < m; ++i) tmp_[i] = E_[i] * E_[i] * a[i] + h * E_[i] * k3_[i];
    rhs_(tmp_, k4_);
    for (std::size_t i = 0; i < m; ++i) {
      const cplx E2 = E_[i] * E_[i];
      a[i] = E2 * a[i] + (h / 6.0) * (E2 * k1_[i] + 2.0 * E_[i] * (k2_[i] + k3_[i]) + k4_[i]);
    }
  }

  WickRhs& rhs() { return rhs_; }

 private:
  double dt_;
  WickRhs rhs_;
  std::vector<cplx> E_;
  SpectralField k1_, k2_, k3_, k4_, tmp_;
};

/// One Lawson Gauss-Legendre step.  With v the rotating-frame state and
/// G(t, v) = exp(-iQt) F(exp(iQt) v), the stages are
///   K_i = G(c_i h, a + h sum_j A_ij K_j),   a+ = exp(iQh) (a + h/2 (K_1 + K_2)),
/// c = 1/2 -+ sqrt(3)/6.  Stages are iterated from K_i = G(c_i h, a) until the
/// update stops shrinking below `tol` relative to |K|.
class LawsonGl4 {
 public:
  LawsonGl4(const SpectralField& shape, double dt, double M, int max_sweeps = 60)
      : dt_(dt), max_sweeps_(max_sweeps), rhs_(shape.N(), M), k1_(shape), k2_(shape), y_(shape), f_(shape) {
    const auto& pts = shape.index().points();
    const double r3 = std::sqrt(3.0);
    c_ = {0.5 - r3 / 6.0, 0.5 + r3 / 6.0};
    A_ = {0.25, 0.25 - r3 / 6.0, 0.25 + r3 / 6.0, 0.25};
    for (int s = 0; s < 2; ++s) {
      fwd_[s].resize(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) fwd_[s][i] = std::polar(1.0, c_[s] * dt * qform(pts[i], shape.torus()));
    }
    full_.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) full_[i] = std::polar(1.0, dt * qform(pts[i], shape.torus()));
  }

  void step(SpectralField& a) {
    const std::size_t m = a.size();
    stage(0, a, nullptr, k1_);
    stage(1, a, nullptr, k2_);
    double prev = INFINITY;
    for (sweeps_ = 1; sweeps_ <= max_sweeps_; ++sweeps_) {
      double change = 0.0, size = 0.0;
      for (int s = 0; s < 2; ++s) {
        SpectralField& k = s == 0 ? k1_ : k2_;
        stage(s, a, &k, f_);
        for (std::size_t i = 0; i < m; ++i) {
          change = std::max(change, std::abs(f_[i] - k[i]));
          size = std::max(size, std::abs(f_[i]));
        }
        k.coeffs().swap(f_.coeffs());
      }
      // Stop at the roundoff floor: once the update no longer contracts.
      if (change <= 1e-15 * size || change >= prev) break;
      prev = change;
    }
    for (std::size_t i = 0; i < m; ++i) a[i] = full_[i] * (a[i] + 0.5 * dt_ * (k1_[i] + k2_[i]));
  }

  int last_sweeps() const { return sweeps_; }
  WickRhs& rhs() { return rhs_; }

 private:
  // out = G(c_s h, a + h sum_j A_sj K_j); with no stages given, G(c_s h, a).
  void stage(int s, const SpectralField& a, const SpectralField* current, SpectralField& out) {
    const std::size_t m = a.size();
    const auto& E = fwd_[s];
    for (std::size_t i = 0; i < m; ++i) {
      cplx v = a[i];
      if (current) v += dt_ * (A_[2 * s] * k1_[i] + A_[2 * s + 1] * k2_[i]);
      y_[i] = E[i] * v;
    }
    rhs_(y_, out);
    for (std::size_t i = 0; i < m; ++i) out[i] *= std::conj(E[i]);
  }

  double dt_;
  int max_sweeps_;
  int sweeps_ = 0;
  WickRhs rhs_;
  std::array<double, 2> c_{};
  std::array<double, 4> A_{};
  std::array<std::vector<cplx>, 2> fwd_;
  std::vector<cplx> full_;
  SpectralField k1_, k2_, y_, f_;
};

inline bool all_finite(const SpectralField& u) {
  for (const auto& c : u.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

/// Integrates over [0, T] (negative dt runs backward) in round(T/dt) steps.
inline Trajectory evolve(const SpectralField& u0, double dt, double T, const std::string& scheme = kSchemeRk4If,
                         EvolveOptions opt = {}) {
  if (scheme != kSchemeRk4If && scheme != kSchemeGl4If)
    throw std::invalid_argument("evolve: unknown scheme '" + scheme + "'");
  if (!(std::abs(dt) > 0.0) || !(std::abs(T) >= std::abs(dt)) || dt * T < 0.0)
    throw std::invalid_argument("evolve: need dt != 0 and |T| >= |dt| with matching signs");
  if (opt.record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");

  const auto steps = static_cast<std::int64_t>(std::llround(T / dt));
  Trajectory traj;
  traj.scheme_id = scheme;
  traj.dt = dt;
  traj.M_N = 2.0 * mass(u0);
  std::optional<LawsonRk4> rk4;
  std::optional<LawsonGl4> gl4;
  if (scheme == kSchemeGl4If) {
    gl4.emplace(u0, dt, traj.M_N);
  } else {
    rk4.emplace(u0, dt, traj.M_N);
  }
  CubicWorkspace& ws = rk4 ? rk4->rhs().workspace() : gl4->rhs().workspace();
  SpectralField a = u0;

  auto record = [&](std::int64_t k) {
    const double t = static_cast<double>(k) * dt;
    traj.times.push_back(t);
    traj.states.push_back(a);
    traj.conserved_log.push_back(
        {t, mass(a), opt.log_energy ? energy(a, traj.M_N, ws) : 0.0});
  };

  record(0);
  for (std::int64_t k = 1; k <= steps; ++k) {
    if (rk4) {
      rk4->step(a);
    } else {
      gl4->step(a);
    }
    if (!all_finite(a)) throw BlowUpError(static_cast<double>(k - 1) * dt);
    if (k % opt.record_every == 0 || k == steps) record(k);
  }
  return traj;
}

}  // namespace wnls
