#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ccx {

/// Worker cap: hardware concurrency, optionally limited by CCX_THREADS.
inline int thread_cap() {
  static const int cap = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("CCX_THREADS")) {
      const int req = std::atoi(env);
      if (req >= 1) n = std::min(n, req);
    }
    return n;
  }();
  return cap;
}

/// Runs fn(begin, end) over a partition of [0, n). Chunks are disjoint, so
/// bodies that write to disjoint outputs are race-free and deterministic.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  if (n <= 0) return;
  const int workers = static_cast<int>(
      std::min<std::int64_t>(thread_cap(), n));
  if (workers <= 1) {
    fn(std::int64_t(0), n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    const std::int64_t b = t * chunk;
    const std::int64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ccx
