#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace d4 {

// D4_THREADS, else 1
int default_threads();

// Runs fn(begin, end) over fixed blocks of `block` indices. The block partition does not
// depend on the thread count, so per-block results are identical for any `threads`.
void parallel_blocks(std::size_t n, std::size_t block, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

double pairwise_sum(std::vector<double> v);

template <class T>
T pairwise_reduce(std::vector<T> v) {
  if (v.empty()) return T{};
  while (v.size() > 1) {
    std::size_t half = (v.size() + 1) / 2;
    for (std::size_t k = 0; k + half < v.size(); ++k) v[k] += v[k + half];
    v.resize(half);
  }
  return v[0];
}

}  // namespace d4
