#if defined(NETAVG_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

namespace netavg::kernels::detail {
namespace {

double block_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  alignas(32) double l[kLanes];
  _mm256_store_pd(l, acc);
  for (std::size_t k = 0; k < kLanes && i < n; ++i, ++k) l[k] += x[i];
  return combine_lanes_sum(l);
}

double block_sum_sq_dev(const double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  alignas(32) double l[kLanes];
  _mm256_store_pd(l, acc);
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
  __m256d vmin = _mm256_set1_pd(x[0]);
  __m256d vmax = vmin;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(x + i);
    vmin = _mm256_min_pd(vmin, v);
    vmax = _mm256_max_pd(vmax, v);
  }
  alignas(32) double lmin[kLanes], lmax[kLanes];
  _mm256_store_pd(lmin, vmin);
  _mm256_store_pd(lmax, vmax);
  for (std::size_t k = 0; k < kLanes && i < n; ++i, ++k) {
    lmin[k] = std::min(lmin[k], x[i]);
    lmax[k] = std::max(lmax[k], x[i]);
  }
  lo = std::min(std::min(lmin[0], lmin[2]), std::min(lmin[1], lmin[3]));
  hi = std::max(std::max(lmax[0], lmax[2]), std::max(lmax[1], lmax[3]));
}

void blend(double* y, const double* x, std::size_t n, double a) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d voma = _mm256_set1_pd(1.0 - a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d t = _mm256_mul_pd(voma, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), t));
  }
  const double oma = 1.0 - a;
  for (; i < n; ++i) y[i] = std::fma(a, x[i], oma * y[i]);
}

}  // namespace

const Vtable& avx2_vtable() {
  static const Vtable v{sum, sum_sq_dev, min_max, blend};
  return v;
}

}  // namespace netavg::kernels::detail

#endif  // NETAVG_HAVE_AVX2
