#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kchemo {

namespace detail {
inline constexpr std::size_t kPairwiseBlock = 8;
}

/// Pairwise (tree) summation with a fixed split order. The result depends only
/// on the input sequence, never on how the caller iterates.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= detail::kPairwiseBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Element-wise pairwise sum of `count` equally sized slices stored back to back.
/// out[i] = sum_k slices[k*len + i], reduced in the same tree order as pairwise_sum.
inline void pairwise_slice_sum(std::span<const double> slices, std::size_t len, std::size_t first,
                               std::size_t count, std::span<double> out) {
  if (count <= detail::kPairwiseBlock) {
    for (std::size_t i = 0; i < len; ++i) out[i] = 0.0;
    for (std::size_t k = first; k < first + count; ++k) {
      const double* s = slices.data() + k * len;
      for (std::size_t i = 0; i < len; ++i) out[i] += s[i];
    }
    return;
  }
  const std::size_t half = count / 2;
  std::vector<double> right(len);
  pairwise_slice_sum(slices, len, first, half, out);
  pairwise_slice_sum(slices, len, first + half, count - half, right);
  for (std::size_t i = 0; i < len; ++i) out[i] += right[i];
}

}  // namespace kchemo
