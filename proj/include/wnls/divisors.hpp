#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wnls {

/// Prime factorization by trial division, ascending primes.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t m) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    unsigned r = 0;
    while (m % p == 0) {
      m /= p;
      ++r;
    }
    if (r) out.emplace_back(p, r);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

/// d(m): number of positive divisors, prod (r_i + 1).
inline std::uint64_t divisor_count(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("divisor_count: zero has infinitely many divisors");
  std::uint64_t d = 1;
  for (auto [p, r] : factorize(m)) d *= r + 1;
  return d;
}

/// #{(a, b) in Z x Z : a b = M}, signs included: 2 d(|M|).
inline std::uint64_t divisor_pairs(std::int64_t M) {
  if (M == 0) throw std::invalid_argument("divisor_pairs: M = 0 has infinitely many factorizations");
  const std::uint64_t m = M < 0 ? static_cast<std::uint64_t>(-(M + 1)) + 1 : static_cast<std::uint64_t>(M);
  return 2 * divisor_count(m);
}

/// d(m) for every m in [0, limit] (entry 0 unused), by a harmonic sieve.
inline std::vector<std::uint32_t> divisor_count_table(std::uint32_t limit) {
  std::vector<std::uint32_t> d(static_cast<std::size_t>(limit) + 1, 0);
  for (std::uint32_t i = 1; i <= limit; ++i)
    for (std::uint64_t j = i; j <= limit; j += i) ++d[j];
  return d;
}

struct DivisorRecord {
  std::uint64_t bound = 0;      // decade limit
  std::uint64_t argmax = 0;     // smallest M <= bound attaining the running maximum
  std::uint64_t pairs = 0;      // divisor_pairs(argmax)
  double exponent = 0.0;        // log(pairs) / log(argmax)
};

/// For each bound, the record-setting M <= bound and its exponent
/// log(pairs)/log(M).  Bounds must be increasing.
inline std::vector<DivisorRecord> divisor_running_max(const std::vector<std::uint64_t>& bounds) {
  if (bounds.empty()) return {};
  const auto table = divisor_count_table(static_cast<std::uint32_t>(bounds.back()));
  std::vector<DivisorRecord> out;
  std::uint64_t best = 0, best_m = 1;
  std::uint64_t m = 1;
  for (auto bound : bounds) {
    for (; m <= bound; ++m)
      if (table[m] > best) {
        best = table[m];
        best_m = m;
      }
    const std::uint64_t pairs = 2 * best;
    out.push_back({bound, best_m, pairs,
                   best_m > 1 ? std::log(static_cast<double>(pairs)) / std::log(static_cast<double>(best_m)) : 0.0});
  }
  return out;
}

}  // namespace wnls
