#include <gtest/gtest.h>

#include <random>

#include "wnls/counting.hpp"

namespace {

using wnls::CountMethod;
using wnls::FreqIndex;
using wnls::ResonanceQuery;
using wnls::TorusSpec;

const TorusSpec kSqrt2(1.41421356237);

// Test-local brute force, written independently of the library predicates.
double level_bf(FreqIndex a, FreqIndex b, FreqIndex c, double g) {
  const std::int64_t d1 = b.n1 - a.n1, d2 = b.n2 - a.n2, e1 = b.n1 - c.n1, e2 = b.n2 - c.n2;
  return static_cast<double>(d1 * e1) + g * static_cast<double>(d2 * e2);
}

bool shell_bf(FreqIndex n, std::int64_t N) {
  const std::int64_t r2 = n.n1 * n.n1 + n.n2 * n.n2;
  return r2 > 0 && 4 * r2 > N * N && r2 <= N * N;
}

std::uint64_t brute_fix12(FreqIndex n1, FreqIndex n2, const ResonanceQuery& q) {
  std::uint64_t c = 0;
  for (std::int64_t x = -q.N3; x <= q.N3; ++x)
    for (std::int64_t y = -q.N3; y <= q.N3; ++y) {
      FreqIndex n3{x, y};
      if (!shell_bf(n3, q.N3) || (q.wick && n3 == n2)) continue;
      const double l = level_bf(n1, n2, n3, q.torus.gamma());
      if (l >= q.mu - q.W && l <= q.mu + q.W) ++c;
    }
  return c;
}

std::uint64_t brute_fix13(FreqIndex n1, FreqIndex n3, const ResonanceQuery& q) {
  std::uint64_t c = 0;
  for (std::int64_t x = -q.N2; x <= q.N2; ++x)
    for (std::int64_t y = -q.N2; y <= q.N2; ++y) {
      FreqIndex n2{x, y};
      if (!shell_bf(n2, q.N2) || (q.wick && (n2 == n1 || n2 == n3))) continue;
      const double l = level_bf(n1, n2, n3, q.torus.gamma());
      if (l >= q.mu - q.W && l <= q.mu + q.W) ++c;
    }
  return c;
}

std::uint64_t brute_fix1(FreqIndex n1, const ResonanceQuery& q) {
  std::uint64_t c = 0;
  for (std::int64_t a = -q.N2; a <= q.N2; ++a)
    for (std::int64_t b = -q.N2; b <= q.N2; ++b) {
      FreqIndex n2{a, b};
      if (!shell_bf(n2, q.N2) || (q.wick && n2 == n1)) continue;
      c += brute_fix12(n1, n2, q);
    }
  return c;
}

FreqIndex random_in_shell(std::mt19937_64& rng, std::int64_t N) {
  const auto pts = wnls::shell_points(N);
  return pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)];
}

TEST(ResonanceLevel, Examples) {
  for (FreqIndex n3 : {FreqIndex{0, 0}, FreqIndex{5, -3}})
    EXPECT_EQ(wnls::resonance_level({2, 1}, {2, 1}, n3, kSqrt2), 0.0);
  EXPECT_EQ(wnls::resonance_level({0, 0}, {1, 0}, {0, 1}, TorusSpec(1.5)), 1.0);
}

TEST(ResonanceLevel, QuarticPhaseIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-500, 500);
  for (int t = 0; t < 10000; ++t) {
    const FreqIndex a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)}, c{coord(rng), coord(rng)};
    const double lhs = wnls::resonance_level(a, b, c, kSqrt2);
    const double rhs = -0.5 * (wnls::qform(a, kSqrt2) - wnls::qform(b, kSqrt2) + wnls::qform(c, kSqrt2) -
                               wnls::qform(a - b + c, kSqrt2));
    const double scale = wnls::qform(a, kSqrt2) + wnls::qform(b, kSqrt2) + wnls::qform(c, kSqrt2) + 1.0;
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * scale);
  }
}

TEST(CountFix12, LineExample) {
  ResonanceQuery q{.N1 = 1, .N2 = 1, .N3 = 8, .mu = 0.0, .W = 1.0, .torus = kSqrt2, .wick = true};
  // Independent: first coordinate of n3 in {0,1,2}, inside shell 8.
  std::uint64_t expected = 0;
  for (std::int64_t x = 0; x <= 2; ++x)
    for (std::int64_t y = -8; y <= 8; ++y)
      if (shell_bf({x, y}, 8) && !(x == 1 && y == 0)) ++expected;
  const auto oracle = wnls::count_fix12({0, 0}, {1, 0}, q, CountMethod::oracle);
  const auto strip = wnls::count_fix12({0, 0}, {1, 0}, q, CountMethod::strip);
  EXPECT_EQ(oracle.count, expected);
  EXPECT_EQ(strip.count, expected);
  EXPECT_EQ(expected, 24u);
}

TEST(CountFix12, VacuousAndEmptyWindows) {
  const FreqIndex n1{3, -2}, n2{-1, 4};
  ResonanceQuery q{.N1 = 4, .N2 = 4, .N3 = 16, .mu = 0.0, .W = 1e6, .torus = kSqrt2, .wick = true};
  const auto shell = wnls::shell_points(16).size();
  const bool n2_in_shell = wnls::in_shell(n2, 16);
  EXPECT_EQ(wnls::count_fix12(n1, n2, q, CountMethod::strip).count, shell - (n2_in_shell ? 1 : 0));
  q.wick = false;
  EXPECT_EQ(wnls::count_fix12(n1, n2, q, CountMethod::oracle).count, shell);
  q.W = 1.0;
  q.mu = 1e5;
  EXPECT_EQ(wnls::count_fix12(n1, n2, q, CountMethod::oracle).count, 0u);
  EXPECT_EQ(wnls::count_fix12(n1, n2, q, CountMethod::strip).count, 0u);
}

TEST(CountFix12, RejectsDegenerateLine) {
  ResonanceQuery q{.N3 = 4, .torus = kSqrt2};
  EXPECT_THROW(wnls::count_fix12({1, 1}, {1, 1}, q, CountMethod::strip), std::invalid_argument);
}

TEST(CountFix12, ReflectedConstraintAndNegation) {
  // <n1-n2, n1-n3> = Q(n2-n1) - <n2-n1, n2-n3>: swapping n1, n2 reflects the
  // window about Q(d).  Wick off so the exclusions do not differ.
  const std::vector<std::pair<FreqIndex, FreqIndex>> cells = {{{5, 2}, {-3, 7}}, {{0, 9}, {1, 8}}, {{12, -4}, {-6, -6}}};
  for (auto [n1, n2] : cells) {
    for (double mu : {0.37, -5.21, 13.9}) {
      ResonanceQuery q{.N1 = 16, .N2 = 16, .N3 = 32, .mu = mu, .W = 1.0, .torus = kSqrt2, .wick = false};
      ResonanceQuery r = q;
      r.mu = wnls::qform(n2 - n1, kSqrt2) - mu;
      const auto a = wnls::count_fix12(n1, n2, q, CountMethod::strip).count;
      EXPECT_EQ(a, wnls::count_fix12(n2, n1, r, CountMethod::strip).count);
      EXPECT_EQ(a, wnls::count_fix12(-n1, -n2, q, CountMethod::strip).count);
    }
  }
}

TEST(CountFix23, AliasOfFix12) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    ResonanceQuery q{.N1 = 16, .N2 = 8, .N3 = 8, .mu = 3.0 * t - 20.0, .W = 1.0, .torus = kSqrt2, .wick = true};
    const FreqIndex n2 = random_in_shell(rng, 8), n3 = random_in_shell(rng, 8);
    if (n2 == n3) continue;
    std::uint64_t expected = 0;
    for (const auto& n1 : wnls::shell_points(16)) {
      if (n1 == n2) continue;
      const double l = level_bf(n1, n2, n3, kSqrt2.gamma());
      if (l >= q.mu - q.W && l <= q.mu + q.W) ++expected;
    }
    EXPECT_EQ(wnls::count_fix23(n2, n3, q, CountMethod::strip).count, expected);
    EXPECT_EQ(wnls::count_fix23(n2, n3, q, CountMethod::oracle).count, expected);
  }
}

TEST(CountFix13, Examples) {
  ResonanceQuery q{.N1 = 8, .N2 = 8, .N3 = 8, .mu = -1e4, .W = 1.0, .torus = kSqrt2, .wick = true};
  EXPECT_EQ(wnls::count_fix13({3, 4}, {-5, 2}, q, CountMethod::strip).count, 0u);
  EXPECT_EQ(wnls::count_fix13({3, 4}, {-5, 2}, q, CountMethod::oracle).count, 0u);

  q.mu = 0.0;
  for (std::int64_t N2 : {2, 4, 8, 16}) {
    q.N2 = N2;
    EXPECT_EQ(wnls::count_fix13({0, 0}, {0, 0}, q, CountMethod::strip).count, 0u);
    EXPECT_EQ(wnls::count_fix13({0, 0}, {0, 0}, q, CountMethod::oracle).count, 0u);
  }
  q.N2 = 1;  // Q(n2) <= 1 keeps (+-1, 0) only since gamma > 1
  EXPECT_EQ(wnls::count_fix13({0, 0}, {0, 0}, q, CountMethod::strip).count, 2u);
}

TEST(CountFix13, GenericInstance) {
  ResonanceQuery q{.N1 = 64, .N2 = 16, .N3 = 64, .mu = 10.5, .W = 1.0, .torus = kSqrt2, .wick = true};
  const FreqIndex n1{40, 30}, n3{-20, 45};
  ASSERT_TRUE(wnls::in_shell(n1, 64) && wnls::in_shell(n3, 64));
  const auto expected = brute_fix13(n1, n3, q);
  EXPECT_EQ(wnls::count_fix13(n1, n3, q, CountMethod::oracle).count, expected);
  EXPECT_EQ(wnls::count_fix13(n1, n3, q, CountMethod::strip).count, expected);
  // A level actually attained: shift mu onto a point of the shell.
  q.mu = wnls::resonance_level(n1, {3, -7}, n3, kSqrt2);
  const auto hit = brute_fix13(n1, n3, q);
  EXPECT_GE(hit, 1u);
  EXPECT_EQ(wnls::count_fix13(n1, n3, q, CountMethod::strip).count, hit);
}

TEST(CountFix1, ExampleAndWickDifference) {
  ResonanceQuery q{.N1 = 16, .N2 = 4, .N3 = 4, .mu = 0.0, .W = 1.0, .torus = kSqrt2, .wick = true};
  const FreqIndex n1{16, 0};
  const auto expected = brute_fix1(n1, q);
  EXPECT_EQ(wnls::count_fix1(n1, q, CountMethod::oracle).count, expected);
  EXPECT_EQ(wnls::count_fix1(n1, q, CountMethod::strip).count, expected);

  // Wick off minus Wick on = pairs with n2 in {n1, n3}, all at level 0.
  for (FreqIndex m : {FreqIndex{16, 0}, FreqIndex{2, 1}, FreqIndex{0, -3}}) {
    ResonanceQuery on = q, off = q;
    off.wick = false;
    std::uint64_t excluded = 0;
    for (const auto& n2 : wnls::shell_points(4))
      for (const auto& n3 : wnls::shell_points(4))
        if ((n2 == m || n2 == n3) && 0.0 >= q.mu - q.W && 0.0 <= q.mu + q.W) ++excluded;
    const auto c_on = wnls::count_fix1(m, on, CountMethod::strip).count;
    const auto c_off = wnls::count_fix1(m, off, CountMethod::strip).count;
    EXPECT_EQ(c_off - c_on, excluded);
    EXPECT_EQ(c_off, wnls::count_fix1(m, off, CountMethod::oracle).count);
  }
}

TEST(CountFix1, EmptyWindow) {
  ResonanceQuery q{.N1 = 8, .N2 = 8, .N3 = 8, .mu = 1e6, .W = 1.0, .torus = kSqrt2, .wick = true};
  EXPECT_EQ(wnls::count_fix1({5, 5}, q, CountMethod::strip).count, 0u);
}

TEST(Counting, CrossMethodSmallGrid) {
  std::mt19937_64 rng(2024);
  for (std::int64_t N1 : {4, 8, 16}) {
    for (double mu : {0.0, N1 / 2.0, -N1 / 2.0, double(N1), -double(N1)}) {
      for (double W : {0.5, 1.0, 2.0}) {
        for (std::int64_t N2 : {2l, N1}) {
          ResonanceQuery q{.N1 = N1, .N2 = N2, .N3 = N1, .mu = mu, .W = W, .torus = kSqrt2, .wick = true};
          const FreqIndex n1 = random_in_shell(rng, N1), n2 = random_in_shell(rng, N2), n3 = random_in_shell(rng, N1);
          if (n1 != n2) {
            const auto bf = brute_fix12(n1, n2, q);
            EXPECT_EQ(wnls::count_fix12(n1, n2, q, CountMethod::strip).count, bf);
            EXPECT_EQ(wnls::count_fix12(n1, n2, q, CountMethod::oracle).count, bf);
          }
          const auto bf13 = brute_fix13(n1, n3, q);
          EXPECT_EQ(wnls::count_fix13(n1, n3, q, CountMethod::strip).count, bf13);
          EXPECT_EQ(wnls::count_fix13(n1, n3, q, CountMethod::oracle).count, bf13);
          EXPECT_EQ(wnls::count_fix1(n1, q, CountMethod::strip).count, wnls::count_fix1(n1, q, CountMethod::oracle).count);
        }
      }
    }
  }
}

TEST(Counting, MonotoneInWindow) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 10; ++t) {
    const FreqIndex n1 = random_in_shell(rng, 32), n2 = random_in_shell(rng, 32), n3 = random_in_shell(rng, 32);
    std::uint64_t p12 = 0, p13 = 0;
    for (double W : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      ResonanceQuery q{.N1 = 32, .N2 = 32, .N3 = 32, .mu = 7.3, .W = W, .torus = kSqrt2, .wick = true};
      const auto c12 = n1 == n2 ? 0 : wnls::count_fix12(n1, n2, q, CountMethod::strip).count;
      const auto c13 = wnls::count_fix13(n1, n3, q, CountMethod::strip).count;
      EXPECT_GE(c12, p12);
      EXPECT_GE(c13, p13);
      p12 = c12;
      p13 = c13;
    }
  }
}

TEST(Counting, WorkerCountInvariance) {
  ResonanceQuery q{.N1 = 64, .N2 = 32, .N3 = 64, .mu = 12.0, .W = 1.0, .torus = kSqrt2, .wick = true};
  const FreqIndex n1{50, -20};
  const auto one = wnls::count_fix1(n1, q, CountMethod::strip, {.workers = 1}).count;
  EXPECT_EQ(wnls::count_fix1(n1, q, CountMethod::strip, {.workers = 3}).count, one);
  EXPECT_EQ(wnls::count_fix1(n1, q, CountMethod::strip, {.workers = 8}).count, one);
}

}  // namespace
