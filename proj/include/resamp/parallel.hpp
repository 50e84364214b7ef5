#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace resamp {

/// Static-chunked parallel loop over [begin, end). Each index must own its
/// work (results written by index, RNG streams per index), so the outcome
/// does not depend on the thread count. threads <= 1 runs inline.
inline void parallel_for(long begin, long end, int threads,
                         const std::function<void(long)>& body) {
  const long count = end - begin;
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (long i = begin; i < end; ++i) body(i);
    return;
  }
  const long nthreads = std::min<long>(threads, count);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (long t = 0; t < nthreads; ++t) {
    const long lo = begin + t * count / nthreads;
    const long hi = begin + (t + 1) * count / nthreads;
    pool.emplace_back([&, lo, hi]() {
      try {
        for (long i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace resamp
