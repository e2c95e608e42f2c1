#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace discord {

/// Number of worker threads for the embarrassingly parallel loops (time
/// points, Haar samples, parameter sweeps). Results never depend on it: every
/// loop writes into per-index slots and reductions run serially afterwards.
struct Parallelism {
  int threads = 1;
};

/// Calls body(i) for i in [0, n). The first exception thrown by any call is
/// rethrown after all workers have stopped.
template <class Body>
void parallel_for(std::size_t n, Parallelism par, Body&& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, par.threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::min(workers, n); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace discord
