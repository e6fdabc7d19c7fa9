#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace balance::detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end) over [0, count) in blocks of `block`, dynamically scheduled.
/// Callers write results by index, so output never depends on scheduling.
template <typename Body>
void parallel_for_blocks(std::size_t count, unsigned threads, std::size_t block, Body&& body) {
  threads = resolve_threads(threads);
  block = std::max<std::size_t>(block, 1);
  const std::size_t n_blocks = (count + block - 1) / block;
  if (threads <= 1 || n_blocks <= 1) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        body(b * block, std::min(count, (b + 1) * block));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_blocks;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto n_workers = std::min<std::size_t>(threads, n_blocks);
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace balance::detail
