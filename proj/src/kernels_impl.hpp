#pragma once

#include <cmath>
#include <cstddef>

#include "netavg/kernels.hpp"

// Shared reduction skeleton. A backend supplies leaf kernels that work on a
// block of at most kBlock elements with four independent lane accumulators,
// lane k owning elements with index % 4 == k and any tail filling lanes in
// order. Lane results combine as (l0 + l2) + (l1 + l3), which is exactly the
// horizontal add an AVX2 register reduction produces. Blocks combine by a
// balanced pairwise tree. Every backend follows this scheme, so the operation
// order, and therefore the floating point result, is identical everywhere.

namespace netavg::kernels::detail {

inline constexpr std::size_t kLanes = 4;
inline constexpr std::size_t kBlock = 1024;

struct Vtable {
  double (*sum)(const double*, std::size_t);
  double (*sum_sq_dev)(const double*, std::size_t, double);
  void (*min_max)(const double*, std::size_t, double&, double&);
  void (*blend)(double*, const double*, std::size_t, double);
};

const Vtable& scalar_vtable();
#if defined(NETAVG_HAVE_AVX2)
const Vtable& avx2_vtable();
#endif

inline double combine_lanes_sum(const double l[kLanes]) {
  return (l[0] + l[2]) + (l[1] + l[3]);
}

template <class BlockSum>
double pairwise_reduce(const double* x, std::size_t n, BlockSum block) {
  if (n <= kBlock) return block(x, n);
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const std::size_t half = (blocks / 2) * kBlock;
  return pairwise_reduce(x, half, block) + pairwise_reduce(x + half, n - half, block);
}

}  // namespace netavg::kernels::detail
