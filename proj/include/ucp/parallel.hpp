#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ucp {

/// Number of workers to use for `requested` (0 means hardware concurrency).
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls f(i) for every i in [0, n) on up to `workers` threads. Items are
/// handed out dynamically; results must be written to per-index slots. If
/// any call throws, the exception of the lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
  const int nthreads = static_cast<int>(std::min<std::size_t>(resolve_workers(workers), n));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ucp
