#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace semilt {

/// Worker cap: SEMILT_THREADS when set, hardware concurrency otherwise.
inline int default_thread_count() {
  if (const char* env = std::getenv("SEMILT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each call must write
/// only to its own slot of a preallocated result buffer; aggregation then runs
/// serially in index order, so results are identical for every shard count.
template <typename Fn>
void parallel_for_index(std::int64_t n, Fn&& fn, int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  if (threads <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  int workers = static_cast<int>(std::min<std::int64_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=, &fn]() {
      std::int64_t lo = n * w / workers;
      std::int64_t hi = n * (w + 1) / workers;
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace semilt
