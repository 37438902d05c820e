#include "netavg/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace netavg {

void AveragedMatrix::validate(double tol) const {
  if (n < 1 || entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw InvalidMatrix("AveragedMatrix: bad dimensions");
  for (int r = 0; r < n; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < n; ++c) {
      const double v = at(r, c);
      if (!(v >= 0.0 && v <= 1.0 + tol))
        throw InvalidMatrix("AveragedMatrix: entry outside [0,1] at row " + std::to_string(r));
      if (std::abs(v - at(c, r)) > tol)
        throw InvalidMatrix("AveragedMatrix: not symmetric at (" + std::to_string(r) + "," +
                            std::to_string(c) + ")");
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > tol * n)
      throw InvalidMatrix("AveragedMatrix: row " + std::to_string(r) + " sums to " +
                          std::to_string(row_sum));
  }
}

namespace spectral {

std::vector<double> realized_matrix(const InnerRoundOutcome& outcome, int n) {
  if (n < 1) throw std::invalid_argument("realized_matrix: n must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  std::vector<char> on_route(static_cast<std::size_t>(n), 0);
  for (const Route& route : outcome.routes) {
    const double share = 1.0 / route.length();
    for (int u : route.nodes) {
      if (u < 0 || u >= n) throw std::invalid_argument("realized_matrix: node out of range");
      if (on_route[static_cast<std::size_t>(u)])
        throw std::invalid_argument("realized_matrix: routes are not node-disjoint");
      on_route[static_cast<std::size_t>(u)] = 1;
    }
    for (int u : route.nodes)
      for (int v : route.nodes)
        w[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)] =
            share;
  }
  for (int u = 0; u < n; ++u) {
    if (!on_route[static_cast<std::size_t>(u)])
      w[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(u)] =
          1.0;
  }
  return w;
}

InnerRoundOutcome sample_route_outcome(const Graph& g, RandomStream& rng) {
  InnerRoundOutcome outcome;
  outcome.zeta = protocol::choose_direction(g, rng);
  for (int head : protocol::elect_heads(g, outcome.zeta, rng))
    outcome.routes.push_back(protocol::establish_route(g, head, outcome.zeta, rng));
  return outcome;
}

AveragedMatrix expected_matrix_closed_form(const Graph& g) {
  AveragedMatrix m;
  m.n = g.n;
  m.provenance = MatrixProvenance::closed_form;
  m.entries.assign(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n), 0.0);
  switch (g.topology) {
    case Topology::cycle: {
      const double v = 1.0 / g.n;
      std::fill(m.entries.begin(), m.entries.end(), v);
      break;
    }
    case Topology::grid2d: {
      // Half row-averaging plus half column-averaging.
      for (int u = 0; u < g.n; ++u) {
        const SquareIndex su = g.square_of[static_cast<std::size_t>(u)];
        for (int v = 0; v < g.n; ++v) {
          const SquareIndex sv = g.square_of[static_cast<std::size_t>(v)];
          double value = 0.0;
          if (u == v) {
            value = 1.0 / g.m;
          } else if (su.j == sv.j || su.i == sv.i) {
            value = 1.0 / (2.0 * g.m);
          }
          m.entries[static_cast<std::size_t>(u) * static_cast<std::size_t>(g.n) +
                    static_cast<std::size_t>(v)] = value;
        }
      }
      break;
    }
    case Topology::rgg:
      throw UnsupportedTopology(
          "expected_matrix_closed_form: rgg has no closed form; use the Monte-Carlo estimate");
  }
  m.validate(1e-12);
  return m;
}

AveragedMatrix expected_matrix_monte_carlo(const Graph& g, const RoundSampler& sampler,
                                           std::uint64_t samples, RandomStream& rng) {
  if (samples < 1) throw std::invalid_argument("expected_matrix_monte_carlo: samples must be >= 1");
  const std::size_t n = static_cast<std::size_t>(g.n);
  std::vector<double> acc(n * n, 0.0);
  std::vector<char> on_route(n, 0);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const InnerRoundOutcome outcome = sampler(g, rng);
    std::fill(on_route.begin(), on_route.end(), 0);
    for (const Route& route : outcome.routes) {
      const double share = 1.0 / route.length();
      for (int u : route.nodes) {
        on_route[static_cast<std::size_t>(u)] = 1;
        for (int v : route.nodes) {
          acc[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] += share;
        }
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (!on_route[u]) acc[u * n + u] += 1.0;
    }
  }

  AveragedMatrix m;
  m.n = g.n;
  m.provenance = MatrixProvenance::monte_carlo;
  m.samples = samples;
  m.entries.resize(n * n);
  const double inv = 1.0 / static_cast<double>(samples);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double sym = 0.5 * (acc[r * n + c] + acc[c * n + r]) * inv;
      m.entries[r * n + c] = std::max(0.0, sym);
    }
  }
  m.validate(1e-9);
  return m;
}

AveragedMatrix expected_matrix_monte_carlo(const Graph& g, std::uint64_t samples,
                                           RandomStream& rng) {
  return expected_matrix_monte_carlo(g, sample_route_outcome, samples, rng);
}

double lambda2_gap(const AveragedMatrix& matrix) {
  matrix.validate(1e-9);
  const int n = matrix.n;
  if (n < 2) throw InvalidMatrix("lambda2_gap: need n >= 2");
  Eigen::MatrixXd w(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) w(r, c) = matrix.at(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvalidMatrix("lambda2_gap: eigensolver failed");
  const double second_largest = solver.eigenvalues()(n - 2);  // ascending order
  return 1.0 - second_largest;
}

namespace {

CanonicalPathSet make_path_set(PathFamily family, int n) {
  CanonicalPathSet set;
  set.family = family;
  set.n = n;
  set.paths.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  return set;
}

void put_path(CanonicalPathSet& set, int u, int w, std::vector<int> nodes) {
  set.paths[static_cast<std::size_t>(u) * static_cast<std::size_t>(set.n) +
            static_cast<std::size_t>(w)] = std::move(nodes);
}

}  // namespace

CanonicalPathSet canonical_paths_cycle(const Graph& g) {
  if (g.topology != Topology::cycle)
    throw UnsupportedTopology("canonical_paths_cycle: not a cycle");
  // W is fully positive ((1/n)*ones), so every pair connects directly.
  CanonicalPathSet set = make_path_set(PathFamily::cycle_trivial, g.n);
  for (int u = 0; u < g.n; ++u)
    for (int w = 0; w < g.n; ++w)
      if (u != w) put_path(set, u, w, {u, w});
  return set;
}

CanonicalPathSet canonical_paths_grid(const Graph& g) {
  if (g.topology != Topology::grid2d)
    throw UnsupportedTopology("canonical_paths_grid: not a grid");
  CanonicalPathSet set = make_path_set(PathFamily::grid_cases_1_2, g.n);
  for (int u = 0; u < g.n; ++u) {
    const SquareIndex su = g.square_of[static_cast<std::size_t>(u)];
    for (int w = 0; w < g.n; ++w) {
      if (u == w) continue;
      const SquareIndex sw = g.square_of[static_cast<std::size_t>(w)];
      if (su.i == sw.i || su.j == sw.j) {
        put_path(set, u, w, {u, w});
      } else {
        // Corner node sharing u's row and w's column.
        const int z = g.nodes_in_square({sw.i, su.j})[0];
        put_path(set, u, w, {u, z, w});
      }
    }
  }
  return set;
}

CanonicalPathSet canonical_paths_rgg(const Graph& g) {
  if (g.topology != Topology::rgg) throw UnsupportedTopology("canonical_paths_rgg: not an rgg");
  for (const auto& sq : g.square_nodes) {
    if (sq.empty()) throw ProtocolPrecondition("canonical_paths_rgg: graph has an empty square");
  }
  const int a_n = g.min_square_occupancy();
  // Label of a node is its index in its square's construction-order list.
  std::vector<int> label(static_cast<std::size_t>(g.n), 0);
  for (const auto& sq : g.square_nodes) {
    for (std::size_t k = 0; k < sq.size(); ++k) label[static_cast<std::size_t>(sq[k])] = static_cast<int>(k);
  }
  const auto pick = [&](SquareIndex sq, int u, int w) {
    const auto& nodes = g.nodes_in_square(sq);
    const int idx = (label[static_cast<std::size_t>(u)] + label[static_cast<std::size_t>(w)]) % a_n;
    return nodes[static_cast<std::size_t>(idx)];
  };

  CanonicalPathSet set = make_path_set(PathFamily::rgg_cases_1_2_3, g.n);
  for (int u = 0; u < g.n; ++u) {
    const SquareIndex su = g.square_of[static_cast<std::size_t>(u)];
    for (int w = 0; w < g.n; ++w) {
      if (u == w) continue;
      const SquareIndex sw = g.square_of[static_cast<std::size_t>(w)];
      if (su == sw) {
        // Detour through the right-adjacent square, or the left one when u's
        // square sits in the last column.
        const SquareIndex via{su.i < g.m ? su.i + 1 : su.i - 1, su.j};
        put_path(set, u, w, {u, pick(via, u, w), w});
      } else if (su.i == sw.i || su.j == sw.j) {
        put_path(set, u, w, {u, w});
      } else {
        const int z = pick({sw.i, su.j}, u, w);
        put_path(set, u, w, {u, z, w});
      }
    }
  }
  return set;
}

CanonicalPathSet canonical_paths(const Graph& g) {
  switch (g.topology) {
    case Topology::cycle: return canonical_paths_cycle(g);
    case Topology::grid2d: return canonical_paths_grid(g);
    case Topology::rgg: return canonical_paths_rgg(g);
  }
  throw UnsupportedTopology("canonical_paths: unknown topology");
}

double poincare_coefficient(const AveragedMatrix& matrix, const CanonicalPathSet& paths) {
  matrix.validate(1e-9);
  const int n = matrix.n;
  if (paths.n != n) throw std::invalid_argument("poincare_coefficient: dimension mismatch");
  if (n < 2) throw std::invalid_argument("poincare_coefficient: need n >= 2");
  // Uniform stationary distribution pi = 1/n (validated double stochasticity),
  // so |gamma_uw| = sum over hops of n/W_ab, and each path weighs edge loads
  // by pi(u)*pi(w) = 1/n^2.
  const double dn = static_cast<double>(n);
  std::unordered_map<std::uint64_t, double> edge_load;
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      if (u == w) continue;
      const std::vector<int>& path = paths.path(u, w);
      if (path.size() < 2 || path.front() != u || path.back() != w)
        throw InvalidPathSet("poincare_coefficient: missing or malformed path for a node pair");
      double length = 0.0;
      for (std::size_t h = 0; h + 1 < path.size(); ++h) {
        const double entry = matrix.at(path[h], path[h + 1]);
        if (!(entry > 0.0))
          throw InvalidPathSet("poincare_coefficient: path hop " + std::to_string(path[h]) + "->" +
                               std::to_string(path[h + 1]) + " crosses a zero-probability edge");
        length += dn / entry;
      }
      const double weight = length / (dn * dn);
      for (std::size_t h = 0; h + 1 < path.size(); ++h) {
        const std::uint64_t key =
            static_cast<std::uint64_t>(path[h]) * static_cast<std::uint64_t>(n) +
            static_cast<std::uint64_t>(path[h + 1]);
        edge_load[key] += weight;
      }
    }
  }
  double rho = 0.0;
  for (const auto& [key, load] : edge_load) rho = std::max(rho, load);
  return rho;
}

}  // namespace spectral
}  // namespace netavg
