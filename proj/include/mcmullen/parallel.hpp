// Data-parallel loops over disjoint index ranges.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mcm {

/// Worker count: MCMULLEN_THREADS if set and positive, else the hardware concurrency.
inline int thread_count() {
  if (const char* s = std::getenv("MCMULLEN_THREADS")) {
    const int k = std::atoi(s);
    if (k > 0) return k;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for i in [0, count), split into contiguous blocks, one per worker.
template <class F>
void parallel_for(long count, F&& body) {
  const int workers = int(std::min<long>(thread_count(), std::max<long>(count, 1)));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long i = count * w / workers; i < count * (w + 1) / workers; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mcm
