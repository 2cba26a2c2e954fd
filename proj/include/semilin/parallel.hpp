#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace semilin {

inline int default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs f(0..n-1) on up to `workers` threads. Callers write results into
// per-index slots and reduce afterwards in index order, so the outcome does
// not depend on scheduling. The exception of the lowest failing index wins.
template <typename F>
void parallel_for(int n, int workers, F&& f) {
  if (workers <= 0) workers = default_workers();
  if (workers == 1 || n < 2) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int t = std::min(workers, n);
  pool.reserve(t - 1);
  for (int k = 1; k < t; ++k) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace semilin
