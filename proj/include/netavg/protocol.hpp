#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netavg/channel.hpp"
#include "netavg/graph.hpp"
#include "netavg/metrics.hpp"
#include "netavg/rng.hpp"

namespace netavg {

struct ProtocolPrecondition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered node sequence, one node per square along a row (zeta=-1) or column
// (zeta=+1). The cycle's single route is the whole ring.
struct Route {
  std::vector<int> nodes;

  int length() const { return static_cast<int>(nodes.size()); }
};

struct InnerRoundOutcome {
  int zeta = -1;  // -1 horizontal, +1 vertical
  std::vector<Route> routes;
  // (node, gamma) in route-major order; nodes appear at most once.
  std::vector<std::pair<int, double>> path_estimates;
  std::uint64_t messages_used = 0;
};

struct OuterState {
  std::uint64_t tau = 0;
  std::vector<double> theta;
  double delta = 0.1;
  double lambda2_hint = 1.0;
};

struct ProtocolConfig {
  double delta = 0.1;
  double sigma2 = 1.0;
  int max_outer = 100;
  DisseminationMode mode = DisseminationMode::aggregate_noise;
  double lambda2_hint = 1.0;
  // 0 selects the default stride: every tau up to 100, then every 10.
  int record_every = 0;
  bool record_full_theta = false;
};

struct ForwardResult {
  double eta = 0.0;
  std::uint64_t messages = 0;
};

namespace protocol {

// Direction is a fair coin except on the cycle, where nothing is to be
// decided and horizontal is returned without consuming a draw.
int choose_direction(const Graph& g, RandomStream& rng);

// One head per row (zeta=-1) or column (zeta=+1), chosen by passing a token
// square to square from (1,1); each holder picks the next head uniformly in
// the following square. Token messages carry identity, not analog values, so
// no channel noise and no gaussian draws apply. A single-candidate square
// costs no draw, so grid heads are forced and the cycle's head is node 0.
std::vector<int> elect_heads(const Graph& g, int zeta, RandomStream& rng);

// One node per square along the head's row or column, picked uniformly.
Route establish_route(const Graph& g, int head, int zeta, RandomStream& rng);

// Running-sum relay along the route. Each accumulated contribution crosses
// one noisy link, so eta = (true path mean) + v with Var(v) = sigma2/m
// exactly; the relay itself costs m-1 link messages. A one-node route
// returns its value exactly and sends nothing.
ForwardResult forward_average(const Route& route, const std::vector<double>& theta,
                              const NoiseModel& noise, RandomStream& rng);

// Backward pass: position i of an m-node route ends with gamma_i = eta + w_i,
// Var(w_i) = (m-i)/m * sigma2, hence total variance about the true path mean
// (1-(i-1)/m)*sigma2. explicit_messages relays the m copies hop by hop
// (costing m*(m-1) messages, correlated across positions through shared
// hops); aggregate_noise draws each w_i directly (same marginals, one scaled
// draw per non-terminal position). Returned in route order.
std::vector<double> disseminate(const Route& route, double eta, const NoiseModel& noise,
                                RandomStream& rng, DisseminationMode mode);

// Wall-clock steps per outer round: token (m-1) + forward (m-1) + backward
// (2m-2) with routes pipelined; the cycle skips the token phase.
std::uint64_t inner_rounds(const Graph& g);

// Link transmissions per outer round; a property of the protocol, identical
// in both dissemination modes.
std::uint64_t round_messages(const Graph& g);

InnerRoundOutcome run_inner_phase(const Graph& g, const std::vector<double>& theta,
                                  const NoiseModel& noise, RandomStream& rng,
                                  DisseminationMode mode);

// epsilon'(tau) = 1 / (lambda2_hint * (tau + 1/delta)); the default hint 1
// gives the 1/(tau + 1/delta) schedule.
double step_size(std::uint64_t tau, double delta, double lambda2_hint);

// theta[v] = (1 - eps) * theta[v] + eps * gamma_v for route nodes; others
// unchanged.
void apply_outer_update(std::vector<double>& theta, const InnerRoundOutcome& outcome, double eps);

OuterState outer_update(OuterState state, const InnerRoundOutcome& outcome);

RunTrace run(const Graph& g, const std::vector<double>& theta0, const ProtocolConfig& config,
             RandomStream& rng);

}  // namespace protocol
}  // namespace netavg
