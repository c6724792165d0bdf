#pragma once

// Partition-and-run driver.  Work is split into contiguous index blocks; each
// result slot is written by exactly one worker, so callers reducing over the
// slots in index order get the same answer for any worker count.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wnls {

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Calls body(i) for i in [0, count) across `workers` threads (0 = hardware).
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = count * w / workers;
    const std::size_t hi = count * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
}

/// Integer sum of body(i) over [0, count); exact for any worker count.
template <class Body>
std::uint64_t parallel_count(std::size_t count, unsigned workers, Body&& body) {
  std::vector<std::uint64_t> partial(count, 0);
  parallel_for(count, workers, [&](std::size_t i) { partial[i] = body(i); });
  std::uint64_t total = 0;
  for (auto p : partial) total += p;
  return total;
}

}  // namespace wnls
