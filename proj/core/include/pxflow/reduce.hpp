#pragma once

#include <cstddef>
#include <span>

namespace pxflow {

/// Pairwise sum of f(i) for i in [begin, end) with a fixed split tree, so the
/// result depends only on n (never on threading or scheduling).
template <class Fn>
double pairwise_sum(std::size_t begin, std::size_t end, Fn&& f) {
  constexpr std::size_t kLeaf = 128;
  if (end - begin <= kLeaf) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += f(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(begin, mid, f) + pairwise_sum(mid, end, f);
}

template <class Fn>
double pairwise_sum(std::size_t n, Fn&& f) {
  return pairwise_sum(std::size_t{0}, n, f);
}

inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

}  // namespace pxflow
