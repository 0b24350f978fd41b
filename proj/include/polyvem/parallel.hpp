#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace polyvem {

// Worker count: POLYVEM_THREADS caps it, hardware concurrency is the default.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("POLYVEM_THREADS")) {
    unsigned cap = static_cast<unsigned>(std::max(1L, std::strtol(env, nullptr, 10)));
    return cap < hw ? cap : hw;
  }
  return hw;
}

// Static-partition parallel loop. Each index is processed exactly once and
// results must be written to disjoint slots, so the outcome is independent of
// the schedule; reductions are done serially by the caller afterwards.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace polyvem
