#include "tsw/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tsw {

namespace {
std::atomic<int> g_threads{0};

int resolve_threads() {
  int n = g_threads.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("TSW_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}
}  // namespace

void set_thread_count(int n) { g_threads.store(n); }

int thread_count() { return resolve_threads(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = resolve_threads();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int spawned = static_cast<int>(std::min<std::size_t>(workers, n)) - 1;
  pool.reserve(spawned);
  for (int t = 0; t < spawned; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace tsw
