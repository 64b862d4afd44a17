// Minimal deterministic worker pool. SPARSELAB_THREADS caps the worker count
// (default 1). Work is split into index-determined contiguous chunks, so any
// merge done in chunk order is independent of scheduling.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <utility>
#include <vector>

namespace sparselab {

inline int worker_count() {
  const char* env = std::getenv("SPARSELAB_THREADS");
  if (!env) return 1;
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  const long req = std::strtol(env, nullptr, 10);
  return static_cast<int>(std::clamp<long>(req, 1, hw));
}

inline std::vector<std::pair<int, int>> chunk_ranges(int n, int workers) {
  std::vector<std::pair<int, int>> out;
  const int w = std::max(1, std::min(workers, n));
  for (int i = 0; i < w; ++i) {
    const int lo = static_cast<int>(static_cast<long long>(n) * i / w);
    const int hi = static_cast<int>(static_cast<long long>(n) * (i + 1) / w);
    if (hi > lo) out.emplace_back(lo, hi);
  }
  return out;
}

// body(chunk_index, lo, hi) runs once per chunk, possibly concurrently.
// Results indexed by chunk_index can be merged deterministically afterwards.
template <class Body>
void parallel_chunks(int n, Body&& body) {
  const auto chunks = chunk_ranges(n, worker_count());
  if (chunks.size() <= 1) {
    for (std::size_t c = 0; c < chunks.size(); ++c) body(static_cast<int>(c), chunks[c].first, chunks[c].second);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks.size());
  for (std::size_t c = 0; c < chunks.size(); ++c)
    pool.emplace_back([&, c] { body(static_cast<int>(c), chunks[c].first, chunks[c].second); });
  for (auto& t : pool) t.join();
}

}  // namespace sparselab
