#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace lrspin {

/// Compensated (Kahan) accumulator.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

/// Default worker count: LRSPIN_WORKERS env var if set, hardware concurrency otherwise.
inline int default_worker_count() {
  if (const char* env = std::getenv("LRSPIN_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Requested worker count, 0 or negative meaning "use the default".
inline int resolve_workers(int requested) {
  return requested > 0 ? requested : default_worker_count();
}

// Runs fn(lo, hi) over [0, n) split into fixed-size blocks pulled from a shared
// queue. The block layout depends only on block_size, never on the worker count,
// so any per-block results assembled by block index are reproducible bit for bit.
inline void for_each_block(std::int64_t n, std::int64_t block_size, int workers,
                           const std::function<void(std::int64_t block_index,
                                                    std::int64_t lo, std::int64_t hi)>& fn) {
  if (n <= 0) return;
  if (block_size <= 0) block_size = 1;
  const std::int64_t n_blocks = (n + block_size - 1) / block_size;
  workers = resolve_workers(workers);
  if (workers <= 1 || n_blocks == 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b)
      fn(b, b * block_size, std::min(n, (b + 1) * block_size));
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto drain = [&] {
    for (;;) {
      std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b, b * block_size, std::min(n, (b + 1) * block_size));
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_blocks));
  pool.reserve(static_cast<std::size_t>(n_threads) - 1);
  for (int w = 1; w < n_threads; ++w) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

/// Parallel map over [0, n): each index writes only its own output slot.
inline void parallel_for(std::int64_t n, int workers,
                         const std::function<void(std::int64_t)>& fn) {
  const std::int64_t block = std::max<std::int64_t>(1, n / (8 * std::max(1, resolve_workers(workers))));
  for_each_block(n, block, workers, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) fn(i);
  });
}

// Deterministic parallel reduction: partial Kahan sums per fixed block, blocks
// combined in index order. Result is independent of the worker count.
inline double blocked_sum(std::int64_t n, std::int64_t block_size, int workers,
                          const std::function<double(std::int64_t)>& term) {
  if (n <= 0) return 0.0;
  const std::int64_t n_blocks = (n + block_size - 1) / block_size;
  std::vector<double> partials(static_cast<std::size_t>(n_blocks), 0.0);
  for_each_block(n, block_size, workers,
                 [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
                   KahanSum acc;
                   for (std::int64_t i = lo; i < hi; ++i) acc.add(term(i));
                   partials[static_cast<std::size_t>(b)] = acc.value();
                 });
  KahanSum total;
  for (double p : partials) total.add(p);
  return total.value();
}

}  // namespace lrspin
