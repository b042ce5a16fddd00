#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sitelink::detail {

// Runs fn(0) ... fn(count-1) across up to `threads` workers. fn(t) must write
// only to its own slot, so the result does not depend on the thread count.
template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t t = 0; t < count; ++t) fn(t);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < count; t += workers) fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sitelink::detail
