#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace pnl::detail {

/// Evaluates fn(0..count-1) over contiguous chunks, one per hardware thread.
/// Results come back in index order, so reductions over them do not depend on
/// scheduling.
template <typename T>
std::vector<T> parallel_map(int count, const std::function<T(int)>& fn) {
  std::vector<T> results(static_cast<std::size_t>(std::max(count, 0)));
  const int workers = std::min(count, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }
  std::vector<std::jthread> pool;
  const int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(count, begin + chunk);
    pool.emplace_back([&, begin, end] {
      for (int i = begin; i < end; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace pnl::detail
