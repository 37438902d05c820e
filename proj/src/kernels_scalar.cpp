#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

namespace netavg::kernels::detail {
namespace {

double block_sum(const double* x, std::size_t n) {
  double l[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    l[0] += x[i];
    l[1] += x[i + 1];
    l[2] += x[i + 2];
    l[3] += x[i + 3];
  }
  for (std::size_t k = 0; k < kLanes && i < n; ++i, ++k) l[k] += x[i];
  return combine_lanes_sum(l);
}

double block_sum_sq_dev(const double* x, std::size_t n, double c) {
  double l[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t k = 0; k < kLanes; ++k) {
      const double d = x[i + k] - c;
      l[k] = std::fma(d, d, l[k]);
    }
  }
  for (std::size_t k = 0; k < kLanes && i < n; ++i, ++k) {
    const double d = x[i] - c;
    l[k] = std::fma(d, d, l[k]);
  }
  return combine_lanes_sum(l);
}

double sum(const double* x, std::size_t n) {
  return pairwise_reduce(x, n, block_sum);
}

double sum_sq_dev(const double* x, std::size_t n, double c) {
  return pairwise_reduce(x, n, [c](const double* b, std::size_t m) {
    return block_sum_sq_dev(b, m, c);
  });
}

void min_max(const double* x, std::size_t n, double& lo, double& hi) {
  double lmin[kLanes], lmax[kLanes];
  for (std::size_t k = 0; k < kLanes; ++k) {
    lmin[k] = x[0];
    lmax[k] = x[0];
  }
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t k = 0; k < kLanes; ++k) {
      lmin[k] = std::min(lmin[k], x[i + k]);
      lmax[k] = std::max(lmax[k], x[i + k]);
    }
  }
  for (std::size_t k = 0; k < kLanes && i < n; ++i, ++k) {
    lmin[k] = std::min(lmin[k], x[i]);
    lmax[k] = std::max(lmax[k], x[i]);
  }
  lo = std::min(std::min(lmin[0], lmin[2]), std::min(lmin[1], lmin[3]));
  hi = std::max(std::max(lmax[0], lmax[2]), std::max(lmax[1], lmax[3]));
}

void blend(double* y, const double* x, std::size_t n, double a) {
  const double oma = 1.0 - a;
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], oma * y[i]);
}

}  // namespace

const Vtable& scalar_vtable() {
  static const Vtable v{sum, sum_sq_dev, min_max, blend};
  return v;
}

}  // namespace netavg::kernels::detail
