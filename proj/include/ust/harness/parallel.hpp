#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ust {

// Runs fn(index) for index in [0, count) on `workers` threads. Tasks must be
// independent; any deterministic output has to be keyed by index (callers
// write into preallocated slots), so the worker count never affects results.
// The first exception thrown by a task is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = workers > int(count) ? int(count) : workers;
  pool.reserve(std::size_t(n));
  for (int t = 0; t < n; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

int default_worker_count();

}  // namespace ust
