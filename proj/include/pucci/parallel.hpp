#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace pucci {

/// Caps the number of worker threads used by parallel loops.
/// n <= 0 resets to hardware concurrency.
void set_max_threads(int n);
int max_threads();

/// Runs fn(begin, end) over disjoint index chunks of [0, n).
/// Chunk boundaries depend only on n and the thread cap, and every chunk
/// writes to its own output range, so results do not depend on scheduling.
/// Small ranges run inline on the calling thread.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
  if (n == 0) return;
  const std::size_t workers = static_cast<std::size_t>(max_threads());
  if (workers <= 1 || n < 4096) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunks = std::min(workers, n);
  const std::size_t step = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * step;
    const std::size_t hi = std::min(n, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace pucci
