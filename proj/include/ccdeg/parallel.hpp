#ifndef CCDEG_PARALLEL_HPP
#define CCDEG_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ccdeg {

/// Worker cap: TOOL_THREADS if set to a positive integer, else hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("TOOL_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// out[i] = fn(i) for i in [0, n), computed in contiguous chunks on up to
/// worker_count() threads. Output order is independent of scheduling.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& fn) {
  std::vector<R> out(n);
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(1, n / 256));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace ccdeg

#endif  // CCDEG_PARALLEL_HPP
