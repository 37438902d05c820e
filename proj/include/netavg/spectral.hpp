#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "netavg/graph.hpp"
#include "netavg/protocol.hpp"
#include "netavg/rng.hpp"

namespace netavg {

struct InvalidMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidPathSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MatrixProvenance { closed_form, monte_carlo };

// Dense symmetric doubly stochastic W with uniform stationary distribution.
struct AveragedMatrix {
  int n = 0;
  MatrixProvenance provenance = MatrixProvenance::closed_form;
  std::uint64_t samples = 0;  // 0 for closed form
  std::vector<double> entries;  // row-major n*n

  double at(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(c)];
  }

  // Symmetry, row sums 1, entries in [0,1]. Throws InvalidMatrix.
  void validate(double tol = 1e-9) const;
};

enum class PathFamily { cycle_trivial, grid_cases_1_2, rgg_cases_1_2_3 };

// One fixed path per ordered node pair; used for the canonical-path bound.
struct CanonicalPathSet {
  PathFamily family = PathFamily::cycle_trivial;
  int n = 0;
  // Full node sequence for pair (u,w) at index u*n+w; diagonal entries empty.
  std::vector<std::vector<int>> paths;

  const std::vector<int>& path(int u, int w) const {
    return paths[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(w)];
  }
};

namespace spectral {

// Row of every route participant averages its route; everyone else keeps an
// identity row. Row-major dense result.
std::vector<double> realized_matrix(const InnerRoundOutcome& outcome, int n);

// Routes-only round (direction, heads, routes); the value-phase noise draws
// are irrelevant to W, so samplers skip them.
InnerRoundOutcome sample_route_outcome(const Graph& g, RandomStream& rng);

using RoundSampler = std::function<InnerRoundOutcome(const Graph&, RandomStream&)>;

// Exact W for cycle ((1/n)*ones) and grid (1/m diagonal, 1/(2m) same
// row/column). RGG has no closed form; use the Monte-Carlo estimate.
AveragedMatrix expected_matrix_closed_form(const Graph& g);

AveragedMatrix expected_matrix_monte_carlo(const Graph& g, const RoundSampler& sampler,
                                           std::uint64_t samples, RandomStream& rng);
AveragedMatrix expected_matrix_monte_carlo(const Graph& g, std::uint64_t samples,
                                           RandomStream& rng);

// 1 - lambda_{n-1}(W), the spectral gap driving the convergence rate.
double lambda2_gap(const AveragedMatrix& matrix);

CanonicalPathSet canonical_paths_cycle(const Graph& g);
CanonicalPathSet canonical_paths_grid(const Graph& g);
CanonicalPathSet canonical_paths_rgg(const Graph& g);
CanonicalPathSet canonical_paths(const Graph& g);

// Poincare coefficient rho; 1/rho lower-bounds lambda2_gap for this
// reversible uniform-stationary chain. Every path hop must cross a positive
// W entry.
double poincare_coefficient(const AveragedMatrix& matrix, const CanonicalPathSet& paths);

}  // namespace spectral
}  // namespace netavg
