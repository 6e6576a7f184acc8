#pragma once

#include <cstddef>
#include <span>

namespace relcoll {

/// Pairwise (cascade) summation in a fixed order: deterministic regardless of
/// thread count, error growth O(log n).
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace relcoll
