#include "pucci/parallel.hpp"

#include <atomic>

namespace pucci {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n > 0 ? n : 0); }

int max_threads() {
  static const int hw = [] {
    const int n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
  }();
  const int cap = g_max_threads.load(std::memory_order_relaxed);
  return cap > 0 ? std::min(cap, hw) : hw;
}

}  // namespace pucci
