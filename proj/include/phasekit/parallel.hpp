#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace phasekit {

/// Number of workers to use when the caller passes 0.
inline unsigned default_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into `blocks` contiguous ranges and runs
/// fn(block, begin, end) for each, on up to `jobs` threads. Blocks are
/// handed out in order; the first exception thrown is rethrown.
template <class Fn>
void parallel_blocks(std::size_t count, std::size_t blocks, unsigned jobs, Fn&& fn) {
  if (count == 0) return;
  blocks = std::clamp<std::size_t>(blocks, 1, count);
  const auto range = [&](std::size_t b) {
    return std::pair{count * b / blocks, count * (b + 1) / blocks};
  };
  if (jobs == 0) jobs = default_jobs();
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, blocks));
  if (jobs <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto [lo, hi] = range(b);
      fn(b, lo, hi);
    }
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t b;
        {
          std::lock_guard lock(mu);
          if (next == blocks || error) return;
          b = next++;
        }
        try {
          const auto [lo, hi] = range(b);
          fn(b, lo, hi);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace phasekit
