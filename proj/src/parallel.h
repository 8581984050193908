// Copyright 2026 The sptree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPTREE_SRC_PARALLEL_H_
#define SPTREE_SRC_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sptree::internal {

// Calls body(chunk) for every chunk in [0, chunks) using up to `workers`
// threads. Chunks are claimed in increasing order. The first exception
// thrown by any body is rethrown on the calling thread.
template <class Body>
void run_chunks(std::uint64_t chunks, int workers, Body&& body) {
  const auto threads = static_cast<std::uint64_t>(std::max(1, workers));
  if (threads == 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      try {
        body(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::uint64_t k = 0; k < std::min(threads, chunks); ++k) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Splits [0, total) into `chunks` contiguous ranges; returns [lo, hi) of one.
inline std::pair<std::uint64_t, std::uint64_t> chunk_range(std::uint64_t total,
                                                           std::uint64_t chunks,
                                                           std::uint64_t c) {
  const std::uint64_t base = total / chunks;
  const std::uint64_t extra = total % chunks;
  const std::uint64_t lo = c * base + std::min(c, extra);
  return {lo, lo + base + (c < extra ? 1 : 0)};
}

// Chunk count for a scan of `total` items: a fixed function of the input
// size only, so results never depend on the worker count.
inline std::uint64_t chunk_count(std::uint64_t total) {
  return std::max<std::uint64_t>(1, std::min<std::uint64_t>(total / 4096 + 1, 256));
}

}  // namespace sptree::internal

#endif  // SPTREE_SRC_PARALLEL_H_
