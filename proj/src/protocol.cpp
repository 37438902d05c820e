#include "netavg/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "netavg/kernels.hpp"

namespace netavg::protocol {

namespace {

void require_regular(const Graph& g) {
  for (const auto& sq : g.square_nodes) {
    if (sq.empty()) throw ProtocolPrecondition("protocol: graph has an empty square");
  }
}

// Uniform choice within a square; a forced choice consumes no draw, so grid
// rounds and the cycle use no election randomness at all.
int pick_uniform(const std::vector<int>& nodes, RandomStream& rng) {
  if (nodes.size() == 1) return nodes[0];
  return nodes[static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint32_t>(nodes.size())))];
}

}  // namespace

int choose_direction(const Graph& g, RandomStream& rng) {
  if (g.topology == Topology::cycle) return -1;
  return rng.uniform_below(2) == 0 ? -1 : +1;
}

std::vector<int> elect_heads(const Graph& g, int zeta, RandomStream& rng) {
  if (zeta != -1 && zeta != 1) throw std::invalid_argument("elect_heads: zeta must be -1 or +1");
  require_regular(g);
  if (g.topology == Topology::cycle) return {0};
  std::vector<int> heads;
  heads.reserve(static_cast<std::size_t>(g.m));
  for (int k = 1; k <= g.m; ++k) {
    const SquareIndex sq = (zeta == -1) ? SquareIndex{1, k} : SquareIndex{k, 1};
    heads.push_back(pick_uniform(g.nodes_in_square(sq), rng));
  }
  return heads;
}

Route establish_route(const Graph& g, int head, int zeta, RandomStream& rng) {
  if (zeta != -1 && zeta != 1) throw std::invalid_argument("establish_route: zeta must be -1 or +1");
  if (head < 0 || head >= g.n) throw std::invalid_argument("establish_route: head out of range");
  Route route;
  if (g.topology == Topology::cycle) {
    if (head != 0) throw ProtocolPrecondition("establish_route: cycle route starts at node 0");
    route.nodes.resize(static_cast<std::size_t>(g.n));
    for (int k = 0; k < g.n; ++k) route.nodes[static_cast<std::size_t>(k)] = k;
    return route;
  }
  const SquareIndex start = g.square_of[static_cast<std::size_t>(head)];
  if ((zeta == -1 && start.i != 1) || (zeta == +1 && start.j != 1))
    throw ProtocolPrecondition("establish_route: head is not in the first column/row");
  route.nodes.reserve(static_cast<std::size_t>(g.m));
  route.nodes.push_back(head);
  for (int k = 2; k <= g.m; ++k) {
    const SquareIndex sq = (zeta == -1) ? SquareIndex{k, start.j} : SquareIndex{start.i, k};
    route.nodes.push_back(pick_uniform(g.nodes_in_square(sq), rng));
  }
  return route;
}

ForwardResult forward_average(const Route& route, const std::vector<double>& theta,
                              const NoiseModel& noise, RandomStream& rng) {
  const int m = route.length();
  if (m == 0) throw std::invalid_argument("forward_average: empty route");
  for (int v : route.nodes) {
    if (v < 0 || static_cast<std::size_t>(v) >= theta.size())
      throw std::invalid_argument("forward_average: route node out of range");
  }
  if (m == 1) return {theta[static_cast<std::size_t>(route.nodes[0])], 0};
  // Each contribution enters the running sum across one noisy link, so the
  // accumulated average carries gaussian error of variance sigma2/m.
  double acc = 0.0;
  for (int v : route.nodes) acc += transmit(theta[static_cast<std::size_t>(v)], noise, rng);
  return {acc / m, static_cast<std::uint64_t>(m - 1)};
}

std::vector<double> disseminate(const Route& route, double eta, const NoiseModel& noise,
                                RandomStream& rng, DisseminationMode mode) {
  const int m = route.length();
  if (m == 0) throw std::invalid_argument("disseminate: empty route");
  std::vector<double> gamma(static_cast<std::size_t>(m), eta);
  if (m == 1) return gamma;

  switch (mode) {
    case DisseminationMode::explicit_messages: {
      // The last node's m copies walk the route backwards; every hop perturbs
      // each copy, and each node records the bundle average as it passes.
      std::vector<double> copies(static_cast<std::size_t>(m), eta);
      for (int pos = m - 2; pos >= 0; --pos) {
        double acc = 0.0;
        for (auto& c : copies) {
          c = transmit(c, noise, rng);
          acc += c;
        }
        gamma[static_cast<std::size_t>(pos)] = acc / m;
      }
      return gamma;
    }
    case DisseminationMode::aggregate_noise: {
      // Same per-position marginals in one draw each: position i (1-based)
      // receives relay noise of variance (m-i)/m * sigma2 on top of eta.
      const double s2 = noise.effective_sigma2();
      for (int pos = 0; pos < m - 1; ++pos) {
        const double relay_var = static_cast<double>(m - 1 - pos) / m * s2;
        gamma[static_cast<std::size_t>(pos)] = transmit_with_variance(eta, relay_var, rng);
      }
      return gamma;
    }
  }
  throw std::invalid_argument("disseminate: unknown dissemination mode");
}

std::uint64_t inner_rounds(const Graph& g) {
  if (g.topology == Topology::cycle) return static_cast<std::uint64_t>(3) * g.n - 3;
  return static_cast<std::uint64_t>(4) * g.m - 4;
}

std::uint64_t round_messages(const Graph& g) {
  if (g.topology == Topology::cycle) {
    const std::uint64_t n = static_cast<std::uint64_t>(g.n);
    return n * n - 1;  // forward n-1 + backward n*(n-1)
  }
  const std::uint64_t m = static_cast<std::uint64_t>(g.m);
  return (m - 1) * (1 + m + m * m);  // token + forward + backward
}

InnerRoundOutcome run_inner_phase(const Graph& g, const std::vector<double>& theta,
                                  const NoiseModel& noise, RandomStream& rng,
                                  DisseminationMode mode) {
  if (theta.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("run_inner_phase: theta length mismatch");
  InnerRoundOutcome outcome;
  outcome.zeta = choose_direction(g, rng);
  const std::vector<int> heads = elect_heads(g, outcome.zeta, rng);
  outcome.routes.reserve(heads.size());
  for (int head : heads) outcome.routes.push_back(establish_route(g, head, outcome.zeta, rng));
  outcome.path_estimates.reserve(static_cast<std::size_t>(g.n));
  for (const Route& route : outcome.routes) {
    const ForwardResult fwd = forward_average(route, theta, noise, rng);
    const std::vector<double> gamma = disseminate(route, fwd.eta, noise, rng, mode);
    for (int k = 0; k < route.length(); ++k) {
      outcome.path_estimates.emplace_back(route.nodes[static_cast<std::size_t>(k)],
                                          gamma[static_cast<std::size_t>(k)]);
    }
  }
  outcome.messages_used = round_messages(g);
  return outcome;
}

double step_size(std::uint64_t tau, double delta, double lambda2_hint) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("step_size: delta must be in (0, 1/2)");
  if (!(lambda2_hint > 0.0)) throw std::invalid_argument("step_size: lambda2_hint must be > 0");
  return 1.0 / (lambda2_hint * (static_cast<double>(tau) + 1.0 / delta));
}

void apply_outer_update(std::vector<double>& theta, const InnerRoundOutcome& outcome, double eps) {
  const double keep = 1.0 - eps;
  for (const auto& [node, gamma] : outcome.path_estimates) {
    if (node < 0 || static_cast<std::size_t>(node) >= theta.size())
      throw std::invalid_argument("apply_outer_update: estimate node out of range");
    theta[static_cast<std::size_t>(node)] =
        std::fma(eps, gamma, keep * theta[static_cast<std::size_t>(node)]);
  }
}

OuterState outer_update(OuterState state, const InnerRoundOutcome& outcome) {
  const double eps = step_size(state.tau, state.delta, state.lambda2_hint);
  apply_outer_update(state.theta, outcome, eps);
  state.tau += 1;
  return state;
}

namespace {

bool should_record(std::uint64_t tau, int record_every, int max_outer) {
  if (tau == 0 || tau == static_cast<std::uint64_t>(max_outer)) return true;
  if (record_every > 0) return tau % static_cast<std::uint64_t>(record_every) == 0;
  return tau <= 100 || tau % 10 == 0;
}

TraceSnapshot make_snapshot(std::uint64_t tau, std::uint64_t transmissions,
                            const std::vector<double>& theta, double center) {
  const auto stats = kernels::vector_stats(theta.data(), theta.size(), center);
  TraceSnapshot snap;
  snap.tau = tau;
  snap.transmissions = transmissions;
  snap.mean = stats.sum / static_cast<double>(theta.size());
  snap.sum_sq_dev_init = stats.sum_sq_dev;
  snap.min = stats.min;
  snap.max = stats.max;
  return snap;
}

}  // namespace

RunTrace run(const Graph& g, const std::vector<double>& theta0, const ProtocolConfig& config,
             RandomStream& rng) {
  if (theta0.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("run: theta0 length mismatch");
  if (config.max_outer < 1) throw std::invalid_argument("run: max_outer must be >= 1");
  if (!(config.delta > 0.0 && config.delta < 0.5))
    throw std::invalid_argument("run: delta must be in (0, 1/2)");
  if (!(config.lambda2_hint > 0.0)) throw std::invalid_argument("run: lambda2_hint must be > 0");
  require_regular(g);
  const NoiseModel noise = NoiseModel::awgn(config.sigma2);

  RunTrace trace;
  trace.seed = rng.seed();
  trace.stream_id = rng.stream_id();
  trace.n = g.n;
  trace.inner_rounds_per_outer = inner_rounds(g);
  trace.delta = config.delta;
  trace.sigma2 = config.sigma2;
  trace.lambda2_hint = config.lambda2_hint;
  trace.max_outer = config.max_outer;
  trace.mode = config.mode;
  trace.record_every = config.record_every;

  std::vector<double> theta = theta0;
  trace.theta_bar_init =
      kernels::sum(theta.data(), theta.size()) / static_cast<double>(theta.size());

  std::uint64_t transmissions = 0;
  trace.snapshots.push_back(make_snapshot(0, transmissions, theta, trace.theta_bar_init));
  if (config.record_full_theta) trace.theta_snapshots.push_back(theta);

  for (int tau = 0; tau < config.max_outer; ++tau) {
    const InnerRoundOutcome outcome = run_inner_phase(g, theta, noise, rng, config.mode);
    const double eps = step_size(static_cast<std::uint64_t>(tau), config.delta, config.lambda2_hint);
    apply_outer_update(theta, outcome, eps);
    transmissions += outcome.messages_used;
    const std::uint64_t next_tau = static_cast<std::uint64_t>(tau) + 1;
    if (should_record(next_tau, config.record_every, config.max_outer)) {
      trace.snapshots.push_back(make_snapshot(next_tau, transmissions, theta, trace.theta_bar_init));
      if (config.record_full_theta) trace.theta_snapshots.push_back(theta);
    }
  }
  return trace;
}

}  // namespace netavg::protocol
