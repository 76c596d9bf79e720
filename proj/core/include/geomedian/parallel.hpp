#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace geomedian {

/// Number of workers to use when the caller asks for 0 ("all available").
inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on up to `workers` threads, each thread
/// taking a contiguous index range. Results must be written by index; the
/// schedule never influences what body(i) computes. If several indices throw,
/// the exception of the smallest index is rethrown so failures are
/// reproducible.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> failed_at(workers, count);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(count, w * chunk);
      const std::size_t end = std::min(count, begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        for (std::size_t i = begin; i < end; ++i) {
          try {
            body(i);
          } catch (...) {
            errors[w] = std::current_exception();
            failed_at[w] = i;
            return;
          }
        }
      });
    }
  }
  std::size_t first = count;
  std::exception_ptr error;
  for (unsigned w = 0; w < workers; ++w) {
    if (errors[w] && failed_at[w] < first) {
      first = failed_at[w];
      error = errors[w];
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace geomedian
