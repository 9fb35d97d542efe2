#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace lassoscreen {

/// Runs fn(i) for i in [0, count). fn must be safe to call concurrently for
/// distinct i; with threads <= 1 the loop is serial.
inline void parallel_for(Eigen::Index count, int threads,
                         const std::function<void(Eigen::Index)>& fn) {
  if (threads <= 1 || count < 2) {
    for (Eigen::Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Eigen::Index> next{0};
  auto worker = [&]() {
    for (;;) {
      const Eigen::Index i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(n_workers);
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace lassoscreen
