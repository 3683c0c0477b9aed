#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace grafting {

// Runs body(i) for i in [0, n) on up to `jobs` worker threads (jobs <= 0 means
// hardware concurrency).  Work is handed out through a shared counter, so
// uneven item costs balance themselves.  The first exception thrown by any
// worker is rethrown on the calling thread once all workers have stopped.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned workers = jobs > 0 ? (unsigned)jobs : (hw ? hw : 1u);
  if (workers > n) workers = (unsigned)n;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace grafting
