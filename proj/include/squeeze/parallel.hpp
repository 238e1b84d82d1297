#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace squeeze {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be written
// to pre-sized storage indexed by i so output order never depends on scheduling.
// The first exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  std::vector<std::jthread> pool;
  pool.reserve(count);
  for (std::size_t k = 0; k < count; ++k) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

} // namespace squeeze
