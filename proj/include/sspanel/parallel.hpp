#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "sspanel/errors.hpp"

namespace sspanel {

/// Runs body(i) for every i in [0, count) on at most `threads` workers
/// using a static block partition. Each index is handled exactly once, so
/// a body that only writes to its own preallocated slot produces results
/// independent of the thread count. If any body throws, the exception of
/// the lowest-numbered worker that failed is rethrown after all workers
/// join. Throws ConfigError for threads < 1 or count < 0.
inline void parallel_for(long long count, int threads,
                         const std::function<void(long long)>& body) {
  if (threads < 1) throw ConfigError("thread count must be >= 1");
  if (count < 0) throw ConfigError("iteration count must be >= 0");
  if (count == 0) return;
  const long long workers =
      std::min<long long>(threads, count);
  if (workers == 1) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long long w = 0; w < workers; ++w) {
    const long long lo = count * w / workers;
    const long long hi = count * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi]() {
      try {
        for (long long i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace sspanel
