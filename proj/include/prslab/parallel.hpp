// parallel.hpp -- deterministic trial-parallel map
//
// Results are produced into index-addressed slots and reduced by the caller
// in index order, so thread count never changes a reported number.
#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace prslab {

template <typename T, typename Fn>
std::vector<T> parallel_map(std::int64_t count, int threads, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  if (threads <= 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] = fn(i);
    }
    return out;
  }
  const int workers = static_cast<int>(
      std::min<std::int64_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += workers) {
        out[static_cast<std::size_t>(i)] = fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace prslab
