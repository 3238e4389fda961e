#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "dcsplit/types.h"

namespace dcsplit {

// Worker count: DCSPLIT_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DCSPLIT_THREADS")) {
    int requested = std::atoi(env);
    if (requested > 0) return std::min<unsigned>(static_cast<unsigned>(requested), hw);
  }
  return hw;
}

// Runs fn(i) for i in [0, n). Each index is handled by exactly one worker, so
// callers that write into slot i get results independent of scheduling.
template <typename Fn>
void parallel_for(Index n, Fn&& fn) {
  unsigned workers = static_cast<unsigned>(std::min<Index>(thread_budget(), n));
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Index i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dcsplit
