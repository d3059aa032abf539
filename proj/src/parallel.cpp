#include "d4/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace d4 {

int default_threads() {
  if (const char* env = std::getenv("D4_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return 1;
}

void parallel_blocks(std::size_t n, std::size_t block, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (block == 0) block = 1;
  const std::size_t nblocks = (n + block - 1) / block;
  auto run_range = [&](std::size_t first, std::size_t last) {
    for (std::size_t b = first; b < last; ++b)
      fn(b, b * block, std::min(n, (b + 1) * block));
  };
  if (threads <= 1 || nblocks <= 1) {
    run_range(0, nblocks);
    return;
  }
  const std::size_t t = std::min<std::size_t>(threads, nblocks);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t k = 0; k < t; ++k)
    pool.emplace_back(run_range, nblocks * k / t, nblocks * (k + 1) / t);
  for (auto& th : pool) th.join();
}

double pairwise_sum(std::vector<double> v) { return pairwise_reduce(std::move(v)); }

}  // namespace d4
