#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace plausets::detail {

// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are
// handed out dynamically; callers write results by index so the outcome does
// not depend on scheduling. If bodies throw, the exception from the smallest
// failing index is rethrown after all threads join.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::size_t first_fail = count;
  std::exception_ptr error;

  auto run = [&] {
    while (!failed.load()) {
      // Every index below a fetched one was fetched earlier and still runs,
      // so the smallest failing index is always observed.
      const std::size_t i = next++;
      if (i >= count) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < first_fail) {
          first_fail = i;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(run);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace plausets::detail
