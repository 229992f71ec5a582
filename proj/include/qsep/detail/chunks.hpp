#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace qsep::detail {

/// Run `work(chunk_index)` for every chunk and return the partials in chunk
/// order. Chunks may be executed by any thread in any order; since partials
/// are reduced by the caller in index order, results are independent of the
/// thread count.
template <typename Partial, typename Work>
std::vector<Partial> run_chunks(std::uint64_t n_chunks, unsigned threads,
                                const Work& work) {
  std::vector<Partial> partials(n_chunks);
  if (threads <= 1 || n_chunks <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) partials[c] = work(c);
    return partials;
  }
  if (threads > n_chunks) threads = static_cast<unsigned>(n_chunks);
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned k = 0; k < threads; ++k) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        partials[c] = work(c);
      }
    });
  }
  for (auto& th : pool) th.join();
  return partials;
}

}  // namespace qsep::detail
