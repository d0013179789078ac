#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace falconer {

/// Thread cap: FALCONER_LAB_THREADS env var if set, else hardware threads.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("FALCONER_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(chunk) for chunk = 0..n_chunks-1 on up to thread_cap() workers.
/// Chunking is fixed (independent of the worker count) so per-chunk results
/// can be combined in a deterministic order by the caller.
inline void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(thread_cap(), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t c = w; c < n_chunks; c += workers) fn(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace falconer
