#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace aeqnd {

// Environment variable capping worker threads.
inline constexpr const char* kMaxWorkersEnv = "AEQND_MAX_WORKERS";

// max(1, requested) capped by AEQND_MAX_WORKERS when set to a positive integer.
int resolve_workers(int requested);

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is processed
// exactly once; callers write results into slot i so output order never depends
// on scheduling. The exception from the lowest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t width = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (width <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t first_index = n;
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(width);
  for (std::size_t w = 0; w < width; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace aeqnd
