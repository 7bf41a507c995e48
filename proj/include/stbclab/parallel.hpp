#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace stbclab {

// Resolves a worker-count request: n > 0 is taken as-is, n <= 0 means one
// worker per available hardware thread.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs work(chunk_index) for chunk_index in [0, n_chunks) on up to `threads`
// workers and returns the results indexed by chunk. Chunk boundaries are fixed
// by the caller, so reducing the returned vector in index order yields the
// same result for any worker count.
template <class R>
std::vector<R> run_chunked(std::size_t n_chunks, int threads,
                           const std::function<R(std::size_t)>& work) {
  std::vector<R> results(n_chunks);
  if (n_chunks == 0) return results;
  int workers = resolve_threads(threads);
  if (workers > static_cast<int>(n_chunks)) workers = static_cast<int>(n_chunks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) results[i] = work(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n_chunks) break;
        results[i] = work(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace stbclab
