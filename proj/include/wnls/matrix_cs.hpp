#pragma once

// The matrix Cauchy-Schwarz inequality used for random-data multilinear
// estimates.  With sum_j |b_j|^2 <= 1 and lhs = sum_i |sum_j a_ij b_j|^2:
//
//   column form:  lhs <= max_j sum_i |a_ij|^2 + (sum_{j != j'} |sum_i a_ij conj(a_ij')|^2)^{1/2}
//   row form:     lhs <= max_i sum_j |a_ij|^2 + (sum_{i != i'} |sum_j a_i'j conj(a_ij)|^2)^{1/2}
//
// Both hold with constant 1: lhs <= ||A^* A|| = ||A A^*||, and the operator
// norm of a Gram matrix is at most its largest diagonal entry plus the
// Hilbert-Schmidt norm of its off-diagonal part.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wnls {

/// Row-major rows x cols complex matrix.
struct CMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::complex<double>> a;

  std::complex<double> operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct CsCheck {
  double lhs = 0.0;
  double rhs_columns = 0.0;
  double rhs_rows = 0.0;
};

namespace detail {

// Largest Gram diagonal plus off-diagonal Hilbert-Schmidt norm, for the Gram
// matrix of the columns (by_columns) or of the rows.
inline double gram_bound(const CMatrix& A, bool by_columns) {
  const std::size_t n = by_columns ? A.cols : A.rows;
  const std::size_t len = by_columns ? A.rows : A.cols;
  auto entry = [&](std::size_t v, std::size_t k) { return by_columns ? A(k, v) : A(v, k); };
  double diag = 0.0, off = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      std::complex<double> g{};
      for (std::size_t k = 0; k < len; ++k) g += entry(p, k) * std::conj(entry(q, k));
      if (p == q) {
        diag = std::max(diag, g.real());
      } else {
        off += std::norm(g);
      }
    }
  }
  return diag + std::sqrt(off);
}

}  // namespace detail

inline CsCheck matrix_cs_check(const CMatrix& A, const std::vector<std::complex<double>>& b) {
  if (A.a.size() != A.rows * A.cols || b.size() != A.cols) throw std::invalid_argument("matrix_cs_check: shape mismatch");
  double bn = 0.0;
  for (const auto& z : b) bn += std::norm(z);
  if (bn > 1.0 + 1e-12) throw std::invalid_argument("matrix_cs_check: need sum |b_j|^2 <= 1");
  CsCheck r;
  for (std::size_t i = 0; i < A.rows; ++i) {
    std::complex<double> s{};
    for (std::size_t j = 0; j < A.cols; ++j) s += A(i, j) * b[j];
    r.lhs += std::norm(s);
  }
  r.rhs_columns = detail::gram_bound(A, true);
  r.rhs_rows = detail::gram_bound(A, false);
  return r;
}

}  // namespace wnls
