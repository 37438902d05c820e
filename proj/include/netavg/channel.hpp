#pragma once

#include <cmath>
#include <stdexcept>

#include "netavg/rng.hpp"

namespace netavg {

// Additive white gaussian noise on a link. Disabling the model (or setting
// sigma2 to zero) gives perfect links. Per-link variance maps would slot in
// here if ever needed; every current experiment uses one shared variance.
struct NoiseModel {
  double sigma2 = 0.0;
  bool enabled = true;

  NoiseModel() = default;

  explicit NoiseModel(double s2, bool on = true) : sigma2(s2), enabled(on) {
    if (!(s2 >= 0.0)) throw std::invalid_argument("NoiseModel: sigma2 must be >= 0");
  }

  static NoiseModel noiseless() { return NoiseModel(0.0); }
  static NoiseModel awgn(double s2) { return NoiseModel(s2); }

  double effective_sigma2() const { return enabled ? sigma2 : 0.0; }
  double stddev() const { return enabled ? std::sqrt(sigma2) : 0.0; }
};

// One point-to-point transmission. Always burns one gaussian draw, so a
// noiseless run visits the same random sequence as a noisy one and their
// route choices coincide draw for draw.
inline double transmit(double value, const NoiseModel& noise, RandomStream& rng) {
  const double z = rng.gaussian();
  return value + noise.stddev() * z;
}

// A scaled draw used when several per-hop perturbations are folded into one
// equivalent gaussian of the given variance. Consumes one draw like transmit.
inline double transmit_with_variance(double value, double variance, RandomStream& rng) {
  const double z = rng.gaussian();
  return value + std::sqrt(variance) * z;
}

}  // namespace netavg
