#include <gtest/gtest.h>

#include <cmath>

#include "wnls/duhamel.hpp"
#include "wnls/randomfield.hpp"

namespace {

using namespace wnls;

const TorusSpec kSqrt2(1.41421356237);

template <class F>
cplx simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * (h / 3.0);
}

SpaceTimeField free_input(const SpectralField& u0, double delta, std::int64_t spd) {
  return windowed_free_wave(u0, delta, 4 * spd + 1);
}

TEST(GammaMap, ZeroInZeroOut) {
  SpaceTimeField z(4, kSqrt2, picard_grid(0.01, 128), true);
  const auto out = gamma_map(z, 0.01, 4);
  for (const auto& c : out.data()) ASSERT_EQ(c, cplx{});
}

TEST(GammaMap, SingleModeMatchesQuadrature) {
  // Constant-in-time input a e^{i n x}: N(phi a) = -phi^3 |a|^2 a on mode n.
  const double delta = 0.1;
  const FreqIndex n{2, 1};
  const cplx a{0.9, -0.4};
  const double Q = qform(n, kSqrt2);
  auto max_error = [&](std::int64_t spd) {
    SpaceTimeField in(4, kSqrt2, picard_grid(delta, spd), false);
    const auto idx = static_cast<std::size_t>(in.index().find(n));
    for (std::int64_t k = 0; k < in.grid().K; ++k) in.at(k, idx) = a;
    const auto out = gamma_map(in, delta, 4);
    double err = 0.0;
    for (std::int64_t k = 0; k < in.grid().K; k += spd / 8) {
      const double t = in.grid().time(k);
      const cplx integral = simpson(
          [&](double s) { return std::polar(1.0, -Q * s) * (-std::pow(cutoff(s, delta), 3) * std::norm(a) * a); }, 0.0,
          t, 4000);
      const cplx expected = cplx{0.0, 1.0} * cutoff(t, delta) * std::polar(1.0, Q * t) * integral;
      err = std::max(err, std::abs(out.at(k, idx) - expected));
    }
    return err;
  };
  const double e1 = max_error(256), e2 = max_error(512);
  EXPECT_LT(e2, 1e-10);
  EXPECT_GT(e1 / e2, 12.0);  // fourth order
}

TEST(GammaMap, CubicHomogeneity) {
  const auto u0 = sample_data({3, kSqrt2}, 4);
  const auto in = free_input(u0, 0.01, 128);
  SpaceTimeField in2 = in;
  for (auto& c : in2.data()) c *= 2.0;
  const auto g1 = gamma_map(in, 0.01, 4), g2 = gamma_map(in2, 0.01, 4);
  double lin = 0.0, cub = 0.0;
  for (std::size_t i = 0; i < g1.data().size(); ++i) {
    lin = std::max(lin, std::abs(g2.data()[i] - 2.0 * g1.data()[i]));
    cub = std::max(cub, std::abs(g2.data()[i] - 8.0 * g1.data()[i]));
  }
  EXPECT_GT(lin, 1e-3);
  EXPECT_LT(cub, 1e-12 * l2_tx(g2) + 1e-14);
}

TEST(GammaMap, QuadratureSelfConsistency) {
  const double delta = 0.01;
  const auto u0 = sample_data({5, kSqrt2}, 16);
  const auto coarse = gamma_map(free_input(u0, delta, 256), delta, 16);
  const auto fine = gamma_map(free_input(u0, delta, 512), delta, 16);
  double acc = 0.0;
  for (std::int64_t k = 0; k < coarse.grid().K; ++k)
    for (std::size_t i = 0; i < coarse.modes(); ++i) acc += std::norm(coarse.at(k, i) - fine.at(2 * k, i));
  const double diff = std::sqrt(acc * coarse.grid().dt);
  EXPECT_LT(diff, 1e-6);
}

TEST(GammaMap, GridValidation) {
  SpaceTimeField narrow(2, kSqrt2, TimeGrid::symmetric(0.01, 257), true);
  EXPECT_THROW(gamma_map(narrow, 0.01, 2), std::invalid_argument);
  SpaceTimeField coarse(2, kSqrt2, picard_grid(0.01, 16), true);
  EXPECT_THROW(gamma_map(coarse, 0.01, 2), std::invalid_argument);
  SpaceTimeField ok(2, kSqrt2, picard_grid(0.01, 64), true);
  EXPECT_THROW(gamma_map(ok, 0.01, 4), std::invalid_argument);
}

TEST(Picard, ContractsToFixedPoint) {
  const double delta = 0.01;
  const auto u0 = sample_data({21, kSqrt2}, 4);
  PicardOptions opt;
  opt.samples_per_delta = 128;
  const auto run = picard(u0, delta, opt);
  ASSERT_TRUE(run.converged);
  EXPECT_FALSE(run.diverged);
  EXPECT_EQ(run.ratios.size() + 1, run.diff_norms.size());
  for (double r : run.ratios) EXPECT_LT(r, 1.0);
  EXPECT_LT(run.residual, 1e-8);

  // First iterate is Gamma applied to the windowed free wave.
  const auto w1 = gamma_map(free_input(u0, delta, 128), delta, 4);
  EXPECT_NEAR(run.diff_norms[0], xsb_norm(w1, {opt.s0, opt.b0}), 1e-12 * run.diff_norms[0]);
}

}  // namespace
