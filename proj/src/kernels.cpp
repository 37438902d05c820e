#include "netavg/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "kernels_impl.hpp"

namespace netavg::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(NETAVG_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() {
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

const detail::Vtable& vtable_for(Backend b) {
#if defined(NETAVG_HAVE_AVX2)
  if (b == Backend::avx2) return detail::avx2_vtable();
#endif
  (void)b;
  return detail::scalar_vtable();
}

const detail::Vtable& active() { return vtable_for(g_backend.load(std::memory_order_relaxed)); }

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

std::string_view backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_available() { return cpu_has_avx2(); }

bool set_backend(std::string_view name) {
  if (name == "scalar") {
    g_backend.store(Backend::scalar, std::memory_order_relaxed);
    return true;
  }
  if (name == "avx2") {
    if (!cpu_has_avx2()) return false;
    g_backend.store(Backend::avx2, std::memory_order_relaxed);
    return true;
  }
  if (name == "auto") {
    g_backend.store(detect_backend(), std::memory_order_relaxed);
    return true;
  }
  return false;
}

double sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  return active().sum(x, n);
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
  if (n == 0) return 0.0;
  return active().sum_sq_dev(x, n, center);
}

void min_max(const double* x, std::size_t n, double& lo, double& hi) {
  if (n == 0) throw std::invalid_argument("min_max: empty input");
  active().min_max(x, n, lo, hi);
}

VectorStats vector_stats(const double* x, std::size_t n, double center) {
  if (n == 0) throw std::invalid_argument("vector_stats: empty input");
  const detail::Vtable& v = active();
  VectorStats s;
  s.sum = v.sum(x, n);
  s.sum_sq_dev = v.sum_sq_dev(x, n, center);
  v.min_max(x, n, s.min, s.max);
  return s;
}

void blend(double* y, const double* x, std::size_t n, double a) {
  if (n == 0) return;
  active().blend(y, x, n, a);
}

}  // namespace netavg::kernels
