#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace hessfree {

/// HESSFREE_THREADS if set to a positive integer, otherwise the hardware
/// concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("HESSFREE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [begin, end) over contiguous blocks. fn must only
/// write to per-index state. The exception of the lowest failing index is
/// rethrown.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, std::size_t workers, Fn&& fn) {
  if (end <= begin) return;
  const std::size_t count = end - begin;
  workers = std::clamp<std::size_t>(workers == 0 ? default_workers() : workers, 1, count);
  if (workers == 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, end);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = begin + w * block;
      const std::size_t hi = std::min(end, lo + block);
      if (lo >= hi) break;
      threads.emplace_back([&, w, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) {
          try {
            fn(i);
          } catch (...) {
            errors[w] = std::current_exception();
            error_index[w] = i;
            return;
          }
        }
      });
    }
  }
  const auto first = std::min_element(error_index.begin(), error_index.end());
  if (*first != end) std::rethrow_exception(errors[first - error_index.begin()]);
}

}  // namespace hessfree
