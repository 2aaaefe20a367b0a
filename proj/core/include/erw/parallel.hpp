#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace erw {

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Calls fn(i) for every i in [0, count) on up to `threads` workers.
///
/// Work is handed out in fixed-size chunks from a shared counter. Callers
/// write results into per-index slots, so the outcome does not depend on
/// scheduling. If any call throws, the exception from the lowest index is
/// rethrown after all workers finish.
template <class Fn>
void parallel_for(std::int64_t count, unsigned threads, Fn&& fn) {
  if (count <= 0) return;
  threads = std::max(1u, threads);
  constexpr std::int64_t kChunk = 64;

  std::atomic<std::int64_t> next{0};
  std::mutex failure_mutex;
  std::int64_t failed_index = std::numeric_limits<std::int64_t>::max();
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::int64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::int64_t end = std::min(count, begin + kChunk);
      for (std::int64_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace erw
