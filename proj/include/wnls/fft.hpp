#pragma once

// Thin FFTW wrapper for square periodic grids.  Plans are created with
// FFTW_ESTIMATE (deterministic, no timing-dependent algorithm choice) and
// cached per shape and alignment; execution uses the new-array interface so
// one plan serves any buffer.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <new>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "wnls/field.hpp"

namespace wnls {

/// Smallest 7-smooth integer >= n.
inline std::int64_t smooth_size(std::int64_t n) {
  for (std::int64_t m = std::max<std::int64_t>(n, 1);; ++m) {
    std::int64_t r = m;
    for (std::int64_t p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

/// Grid side on which products of three degree-N polynomials project back
/// to |n| <= N without aliasing (needs L > 4N).
inline std::int64_t cubic_grid(std::int64_t N) { return smooth_size(4 * N + 2); }

namespace detail {

/// Allocator returning FFTW-aligned memory, so the SIMD codelets apply.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const { return true; }
};

inline bool simd_aligned(const void* p) { return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0; }

// Plans made on an aligned buffer may only run on aligned arrays; the
// unaligned variants are planned on a deliberately offset buffer.
template <class Make>
fftw_plan make_plan(std::size_t elems, bool aligned, Make&& make) {
  auto* buf = fftw_alloc_complex(elems + 1);
  fftw_plan p = make(aligned ? buf : buf + 1, aligned ? FFTW_ESTIMATE : FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!p) throw std::runtime_error("FFTW planning failed");
  return p;
}

inline std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

/// Full 2-D transform of an L x L array.
inline fftw_plan plan_2d(std::int64_t L, int sign, bool aligned) {
  static std::map<std::tuple<std::int64_t, int, bool>, fftw_plan> cache;
  std::lock_guard lock(planner_mutex());
  auto& p = cache[{L, sign, aligned}];
  if (!p) {
    const int n = static_cast<int>(L);
    p = make_plan(static_cast<std::size_t>(L * L), aligned,
                  [&](fftw_complex* b, unsigned flags) { return fftw_plan_dft_2d(n, n, b, b, sign, flags); });
  }
  return p;
}

/// `count` transforms of length L, consecutive ones `dist` apart with element
/// stride `stride` (rows: stride 1, dist L; columns: stride L, dist 1).
inline fftw_plan plan_batch(std::int64_t L, std::int64_t count, std::int64_t stride, std::int64_t dist, int sign,
                            bool aligned) {
  static std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, int, bool>, fftw_plan> cache;
  std::lock_guard lock(planner_mutex());
  auto& p = cache[{L, count, stride, dist, sign, aligned}];
  if (!p) {
    const int n = static_cast<int>(L);
    p = make_plan(static_cast<std::size_t>(L * L), aligned, [&](fftw_complex* b, unsigned flags) {
      return fftw_plan_many_dft(1, &n, static_cast<int>(count), b, nullptr, static_cast<int>(stride),
                                static_cast<int>(dist), b, nullptr, static_cast<int>(stride), static_cast<int>(dist), sign,
                                flags);
    });
  }
  return p;
}

inline fftw_plan plan_1d(std::int64_t K, int sign, bool aligned) {
  static std::map<std::tuple<std::int64_t, int, bool>, fftw_plan> cache;
  std::lock_guard lock(planner_mutex());
  auto& p = cache[{K, sign, aligned}];
  if (!p) {
    p = make_plan(static_cast<std::size_t>(K), aligned, [&](fftw_complex* b, unsigned flags) {
      return fftw_plan_dft_1d(static_cast<int>(K), b, b, sign, flags);
    });
  }
  return p;
}

/// Runs `plan` in place on `data`, choosing the variant matching its alignment.
template <class Plan>
void run(fftw_complex* data, Plan&& plan) {
  fftw_execute_dft(plan(simd_aligned(data)), data, data);
}

}  // namespace detail

/// In-place unnormalized 1-D transform; forward uses exp(-2 pi i j k / K).
inline void fft_1d(std::vector<cplx>& v, bool forward = true) {
  const auto K = static_cast<std::int64_t>(v.size());
  // Always the unaligned plan: heap alignment of a std::vector varies between
  // runs, and the aligned and unaligned codelets may round differently.
  auto* raw = reinterpret_cast<fftw_complex*>(v.data());
  fftw_execute_dft(detail::plan_1d(K, forward ? FFTW_FORWARD : FFTW_BACKWARD, false), raw, raw);
}

/// Physical-space samples u(x_j) = sum_n a_n exp(i n.x_j) on an L x L grid,
/// x_j = 2 pi j / L, row-major in (j1, j2).
class Grid2D {
 public:
  explicit Grid2D(std::int64_t L) : L_(L), data_(static_cast<std::size_t>(L * L)) {
    if (L < 1) throw std::invalid_argument("Grid2D: L must be positive");
  }

  std::int64_t side() const { return L_; }
  using Buffer = std::vector<cplx, detail::FftwAllocator<cplx>>;

  Buffer& data() { return data_; }
  const Buffer& data() const { return data_; }

  std::size_t slot(const FreqIndex& n) const {
    auto wrap = [this](std::int64_t k) { return ((k % L_) + L_) % L_; };
    return static_cast<std::size_t>(wrap(n.n1) * L_ + wrap(n.n2));
  }

  /// Coefficients -> grid values.  Only the 2N + 1 rows holding data are
  /// transformed along j2 before the full pass along j1.
  void synthesize(const SpectralField& u) {
    std::fill(data_.begin(), data_.end(), cplx{});
    const auto& slots = slots_for(u);
    for (std::size_t i = 0; i < slots.size(); ++i) data_[slots[i]] = u[i];
    if (2 * u.N() + 1 > L_) {
      full(FFTW_BACKWARD);
      return;
    }
    rows(u.N(), FFTW_BACKWARD);
    columns(FFTW_BACKWARD);
  }

  /// Grid values -> coefficients on the ball of `out` (divides by L^2).
  void analyze(SpectralField& out) {
    if (2 * out.N() + 1 > L_) {
      full(FFTW_FORWARD);
    } else {
      columns(FFTW_FORWARD);
      rows(out.N(), FFTW_FORWARD);
    }
    const double scale = 1.0 / static_cast<double>(L_ * L_);
    const auto& slots = slots_for(out);
    for (std::size_t i = 0; i < slots.size(); ++i) out[i] = data_[slots[i]] * scale;
  }

 private:
  const std::vector<std::size_t>& slots_for(const SpectralField& u) {
    if (slots_N_ != u.N()) {
      const auto& pts = u.index().points();
      slots_.resize(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) slots_[i] = slot(pts[i]);
      slots_N_ = u.N();
    }
    return slots_;
  }

  // Rows n1 in [0, N] and [L - N, L - 1], transformed along j2.
  void rows(std::int64_t N, int sign) {
    detail::run(raw(), [&](bool al) { return detail::plan_batch(L_, N + 1, 1, L_, sign, al); });
    if (N > 0) detail::run(raw() + (L_ - N) * L_, [&](bool al) { return detail::plan_batch(L_, N, 1, L_, sign, al); });
  }

  void columns(int sign) {
    detail::run(raw(), [&](bool al) { return detail::plan_batch(L_, L_, L_, 1, sign, al); });
  }

  void full(int sign) {
    detail::run(raw(), [&](bool al) { return detail::plan_2d(L_, sign, al); });
  }

  fftw_complex* raw() { return reinterpret_cast<fftw_complex*>(data_.data()); }

  std::int64_t L_;
  Buffer data_;
  std::int64_t slots_N_ = -1;
  std::vector<std::size_t> slots_;
};

}  // namespace wnls
