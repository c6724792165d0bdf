#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wnls/arcs.hpp"
#include "wnls/divisors.hpp"

namespace {

using wnls::ArcSpec;
using wnls::TorusSpec;

const TorusSpec kSqrt2(1.41421356237);

TEST(ArcCount, FullCircleMatchesScan) {
  ArcSpec arc{.radius = 100.0, .thickness_coeff = 1.0};
  // Exhaustive scan over |a| <= R+1, |b| <= (R+1)/gamma, written out here.
  std::uint64_t expected = 0;
  for (int a = -101; a <= 101; ++a)
    for (int b = -72; b <= 72; ++b) {
      const double r = std::hypot(double(a), kSqrt2.gamma() * b);
      if (std::abs(r - 100.0) <= 0.01) ++expected;
    }
  EXPECT_EQ(wnls::annulus_arc_count(arc, kSqrt2), expected);
  EXPECT_EQ(wnls::annulus_arc_count_scan(arc, kSqrt2), expected);
}

TEST(ArcCount, ThickRingReducesToAreaScan) {
  // c / R = R: the neighborhood is the whole disk of radius 2R.
  for (double R : {3.0, 7.5, 12.0}) {
    ArcSpec arc{.radius = R, .thickness_coeff = R * R};
    std::uint64_t disk = 0;
    for (int a = -30; a <= 30; ++a)
      for (int b = -30; b <= 30; ++b)
        if (std::hypot(double(a), kSqrt2.gamma() * b) <= 2.0 * R) ++disk;
    EXPECT_EQ(wnls::annulus_arc_count(arc, kSqrt2), disk);
  }
}

TEST(ArcCount, RowEnumerationMatchesScanOnArcs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (double R : {20.0, 57.3, 128.0}) {
    for (int t = 0; t < 10; ++t) {
      ArcSpec arc{.radius = R, .thickness_coeff = 2.0, .arc_angle = 0.3 + 0.2 * t, .center_angle = ang(rng)};
      EXPECT_EQ(wnls::annulus_arc_count(arc, kSqrt2), wnls::annulus_arc_count_scan(arc, kSqrt2));
    }
  }
}

TEST(ArcCount, ShortArcsHoldBoundedCounts) {
  // Arcs of angular size R^{-2/3} / 1000 hold O(1) points; check <= 3 for
  // every placement on a 1 degree grid.
  std::uint64_t worst = 0;
  for (double R : {32.0, 64.0, 128.0, 256.0, 512.0, 1024.0}) {
    const double theta = std::pow(R, -2.0 / 3.0) / 1000.0;
    for (int deg = 0; deg < 360; ++deg) {
      ArcSpec arc{.radius = R, .thickness_coeff = 1.0, .arc_angle = theta, .center_angle = deg * std::numbers::pi / 180.0};
      worst = std::max(worst, wnls::annulus_arc_count(arc, kSqrt2));
    }
  }
  EXPECT_LE(worst, 3u);
}

std::uint64_t brute_pairs(std::int64_t M) {
  std::uint64_t c = 0;
  const std::int64_t m = std::abs(M);
  for (std::int64_t a = -m; a <= m; ++a)
    if (a != 0 && M % a == 0) ++c;
  return c;
}

TEST(Divisors, Examples) {
  EXPECT_EQ(wnls::divisor_pairs(1), 2u);
  EXPECT_EQ(brute_pairs(12), 12u);
  EXPECT_EQ(wnls::divisor_pairs(12), 12u);
  EXPECT_EQ(brute_pairs(-6), 8u);
  EXPECT_EQ(wnls::divisor_pairs(-6), 8u);
  EXPECT_THROW(wnls::divisor_pairs(0), std::invalid_argument);
}

TEST(Divisors, SignSymmetryAndBruteForce) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> m(1, 10000);
  for (int t = 0; t < 200; ++t) {
    const auto M = m(rng);
    EXPECT_EQ(wnls::divisor_pairs(M), wnls::divisor_pairs(-M));
    EXPECT_EQ(wnls::divisor_pairs(M), brute_pairs(M));
  }
}

TEST(Divisors, MultiplicativeOnCoprimes) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::int64_t> m(1, 100);
  int checked = 0;
  while (checked < 200) {
    const auto p = m(rng), q = m(rng);
    if (std::gcd(p, q) != 1 || p * q > 10000) continue;
    EXPECT_EQ(brute_pairs(p * q) / 2, (brute_pairs(p) / 2) * (brute_pairs(q) / 2));
    EXPECT_EQ(wnls::divisor_count(p * q), wnls::divisor_count(p) * wnls::divisor_count(q));
    ++checked;
  }
}

TEST(Divisors, SieveMatchesFactorization) {
  const auto table = wnls::divisor_count_table(5000);
  for (std::uint32_t i = 1; i <= 5000; ++i) ASSERT_EQ(table[i], wnls::divisor_count(i)) << i;
}

TEST(Divisors, RunningMaxima) {
  const auto recs = wnls::divisor_running_max({100, 1000});
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].argmax, 60u);   // d = 12
  EXPECT_EQ(recs[0].pairs, 24u);
  EXPECT_EQ(recs[1].argmax, 840u);  // d = 32
  EXPECT_EQ(recs[1].pairs, 64u);
}

}  // namespace
