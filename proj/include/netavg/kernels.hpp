#pragma once

#include <cstddef>
#include <string_view>

// Dense reduction kernels used by the trace/metrics layers. Two backends
// (portable scalar, AVX2) share one lane-blocked pairwise reduction scheme,
// so switching backends never changes results, bit for bit.

namespace netavg::kernels {

enum class Backend { scalar, avx2 };

// Accumulated in one pass over a vector.
struct VectorStats {
  double sum = 0.0;
  double sum_sq_dev = 0.0;  // sum of (x[i] - center)^2
  double min = 0.0;
  double max = 0.0;
};

// Backend currently used by the free functions below.
Backend active_backend();
std::string_view backend_name();

// "scalar", "avx2" or "auto". Returns false (and leaves the backend
// unchanged) if the request cannot be honored on this machine.
bool set_backend(std::string_view name);
bool avx2_available();

double sum(const double* x, std::size_t n);
double sum_sq_dev(const double* x, std::size_t n, double center);
// Requires n >= 1.
void min_max(const double* x, std::size_t n, double& lo, double& hi);
VectorStats vector_stats(const double* x, std::size_t n, double center);
// y[i] = (1 - a) * y[i] + a * x[i]
void blend(double* y, const double* x, std::size_t n, double a);

}  // namespace netavg::kernels
