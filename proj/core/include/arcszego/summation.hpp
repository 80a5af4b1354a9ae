#pragma once

#include <cstddef>
#include <vector>

namespace arcszego {

// Pairwise summation over a fixed binary tree. The split points depend only on
// the length, so results are reproducible regardless of thread count.
template <class V, class F>
V pairwise_sum(std::size_t first, std::size_t last, const F& term) {
  const std::size_t n = last - first;
  if (n <= 8) {
    V acc = V(0);
    for (std::size_t i = first; i < last; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = first + n / 2;
  return pairwise_sum<V>(first, mid, term) + pairwise_sum<V>(mid, last, term);
}

template <class V>
V pairwise_sum(const std::vector<V>& x) {
  return pairwise_sum<V>(0, x.size(), [&](std::size_t i) { return x[i]; });
}

}  // namespace arcszego
