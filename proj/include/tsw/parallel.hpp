#pragma once

#include <cstddef>
#include <functional>

namespace tsw {

// Worker-pool size used by parallel_for. 0 means "use available parallelism".
// Overridable via the TSW_THREADS environment variable or the CLI --threads
// flag. Results are independent of the thread count: workers fill
// preallocated slots and reductions happen in index order.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Chunked static partition over the pool.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tsw
