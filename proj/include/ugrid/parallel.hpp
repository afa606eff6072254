#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace ugrid {

// Runs fn(i) for i in [0, n) across up to `threads` workers. Each index must
// only write state it owns; with that contract the result is identical for
// any thread count. Work is handed out in fixed-size blocks via an atomic
// cursor so uneven items balance across workers.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const int workers = std::max(1, threads);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  constexpr std::size_t kBlock = 16;
  auto run = [&] {
    for (;;) {
      const std::size_t lo = cursor.fetch_add(kBlock);
      if (lo >= n) return;
      const std::size_t hi = std::min(n, lo + kBlock);
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int spawned = std::min<int>(workers, static_cast<int>((n + kBlock - 1) / kBlock));
  pool.reserve(static_cast<std::size_t>(spawned) - 1);
  for (int t = 1; t < spawned; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace ugrid
