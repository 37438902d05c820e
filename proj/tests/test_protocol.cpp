#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <netavg/protocol.hpp>

#include "support/oracles.hpp"

using namespace netavg;

TEST_CASE("direction choice: forced on the cycle, fair coin elsewhere") {
  const Graph cyc = build_cycle(6);
  RandomStream used(3, 0), fresh(3, 0);
  CHECK(protocol::choose_direction(cyc, used) == -1);
  CHECK(used.next_u64() == fresh.next_u64());  // no draw consumed

  const Graph grid = build_grid(3);
  RandomStream rng(4, 0);
  int horizontal = 0, vertical = 0;
  for (int i = 0; i < 2000; ++i) {
    const int zeta = protocol::choose_direction(grid, rng);
    REQUIRE((zeta == -1 || zeta == +1));
    (zeta == -1 ? horizontal : vertical) += 1;
  }
  CHECK(horizontal > 850);  // p=1/2, sd~22
  CHECK(vertical > 850);

  RandomStream u2(5, 0), f2(5, 0);
  protocol::choose_direction(grid, u2);
  f2.next_u64();
  CHECK(u2.next_u64() == f2.next_u64());  // exactly one word
}

TEST_CASE("head election: forced heads cost no draws") {
  const Graph grid = build_grid(3);
  RandomStream used(9, 0), fresh(9, 0);
  CHECK(protocol::elect_heads(grid, -1, used) == std::vector<int>{0, 3, 6});  // squares (1,j)
  CHECK(protocol::elect_heads(grid, +1, used) == std::vector<int>{0, 1, 2});  // squares (i,1)
  CHECK(used.next_u64() == fresh.next_u64());

  const Graph cyc = build_cycle(4);
  RandomStream r2(9, 1), f2(9, 1);
  CHECK(protocol::elect_heads(cyc, -1, r2) == std::vector<int>{0});
  CHECK(r2.next_u64() == f2.next_u64());

  CHECK_THROWS_AS(protocol::elect_heads(grid, 0, used), std::invalid_argument);
  CHECK_THROWS_AS(protocol::elect_heads(grid, 2, used), std::invalid_argument);
}

TEST_CASE("head election on an rgg picks within the first column or row") {
  RandomStream grng(15, 0);
  const Graph g = build_rgg(200, 2.0, grng);
  RandomStream rng(16, 0);
  for (int zeta : {-1, +1}) {
    const auto heads = protocol::elect_heads(g, zeta, rng);
    REQUIRE(static_cast<int>(heads.size()) == g.m);
    for (int k = 1; k <= g.m; ++k) {
      const SquareIndex expected = zeta == -1 ? SquareIndex{1, k} : SquareIndex{k, 1};
      CHECK(g.square_of[heads[k - 1]] == expected);
    }
  }
}

TEST_CASE("route establishment walks the head's row or column") {
  const Graph grid = build_grid(3);
  RandomStream rng(21, 0);
  const Route row = protocol::establish_route(grid, 0, -1, rng);
  CHECK(row.nodes == std::vector<int>{0, 1, 2});
  const Route col = protocol::establish_route(grid, 0, +1, rng);
  CHECK(col.nodes == std::vector<int>{0, 3, 6});
  const Route row2 = protocol::establish_route(grid, 3, -1, rng);
  CHECK(row2.nodes == std::vector<int>{3, 4, 5});
  // Head square must sit in the first column (zeta=-1) or row (zeta=+1).
  CHECK_THROWS_AS(protocol::establish_route(grid, 1, -1, rng), ProtocolPrecondition);
  CHECK_THROWS_AS(protocol::establish_route(grid, 3, +1, rng), ProtocolPrecondition);
  CHECK_THROWS_AS(protocol::establish_route(grid, 99, -1, rng), std::invalid_argument);

  const Graph cyc = build_cycle(5);
  const Route ring = protocol::establish_route(cyc, 0, -1, rng);
  CHECK(ring.nodes == std::vector<int>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(protocol::establish_route(cyc, 2, -1, rng), ProtocolPrecondition);

  RandomStream grng(22, 0);
  const Graph rgg = build_rgg(200, 2.0, grng);
  RandomStream rrng(23, 0);
  const auto heads = protocol::elect_heads(rgg, -1, rrng);
  const Route r = protocol::establish_route(rgg, heads[1], -1, rrng);
  REQUIRE(r.length() == rgg.m);
  CHECK(r.nodes[0] == heads[1]);
  const int j = rgg.square_of[heads[1]].j;
  for (int k = 1; k <= rgg.m; ++k) CHECK(rgg.square_of[r.nodes[k - 1]] == SquareIndex{k, j});
}

TEST_CASE("forward averaging: exact without noise, sigma2/m variance with it") {
  const std::vector<double> theta = {1.0, 2.0, 3.0};
  Route route;
  route.nodes = {0, 1, 2};
  RandomStream rng(31, 0);
  const auto exact = protocol::forward_average(route, theta, NoiseModel::noiseless(), rng);
  CHECK(exact.eta == 2.0);
  CHECK(exact.messages == 2);

  Route solo;
  solo.nodes = {1};
  RandomStream used(32, 0), fresh(32, 0);
  const auto single = protocol::forward_average(solo, theta, NoiseModel::awgn(5.0), used);
  CHECK(single.eta == 2.0);
  CHECK(single.messages == 0);
  CHECK(used.next_u64() == fresh.next_u64());  // no draws for a one-node route

  const NoiseModel noise = NoiseModel::awgn(0.9);
  RandomStream mc(33, 0);
  std::vector<double> errors(30000);
  for (auto& e : errors) e = protocol::forward_average(route, theta, noise, mc).eta - 2.0;
  const auto mv = oracle::mean_var(errors);
  CHECK(std::abs(mv.mean) < 0.015);                        // sd ~0.0032
  CHECK(mv.var == doctest::Approx(0.3).epsilon(0.07));     // sigma2/m = 0.3, sd ~0.0025

  Route empty;
  CHECK_THROWS_AS(protocol::forward_average(empty, theta, noise, rng), std::invalid_argument);
  Route bad;
  bad.nodes = {0, 7};
  CHECK_THROWS_AS(protocol::forward_average(bad, theta, noise, rng), std::invalid_argument);
}

TEST_CASE("dissemination marginals and draw accounting") {
  Route route;
  route.nodes = {0, 1, 2};
  const double eta = 5.0;
  const NoiseModel noise = NoiseModel::awgn(1.2);

  for (DisseminationMode mode :
       {DisseminationMode::explicit_messages, DisseminationMode::aggregate_noise}) {
    CAPTURE(dissemination_mode_tag(mode));
    RandomStream quiet(41, 0);
    const auto clean = protocol::disseminate(route, eta, NoiseModel::noiseless(), quiet, mode);
    CHECK(clean == std::vector<double>{5.0, 5.0, 5.0});

    RandomStream mc(42, 0);
    std::vector<double> w1(30000), w2(30000);
    for (std::size_t k = 0; k < w1.size(); ++k) {
      const auto gamma = protocol::disseminate(route, eta, noise, mc, mode);
      CHECK(gamma[2] == eta);  // the last node already holds eta
      w1[k] = gamma[0] - eta;
      w2[k] = gamma[1] - eta;
    }
    // Var(w_i) = (m-i)/m * sigma2 for position i (1-based).
    CHECK(oracle::mean_var(w1).var == doctest::Approx(0.8).epsilon(0.06));
    CHECK(oracle::mean_var(w2).var == doctest::Approx(0.4).epsilon(0.06));
    CHECK(std::abs(oracle::mean_var(w1).mean) < 0.02);
    const double cov = oracle::covariance(w1, w2);
    if (mode == DisseminationMode::explicit_messages) {
      // Copies share the first relay hop: Cov = sigma2/m = 0.4.
      CHECK(cov == doctest::Approx(0.4).epsilon(0.15));
    } else {
      CHECK(std::abs(cov) < 0.05);  // positions drawn independently
    }
  }

  // Explicit relaying consumes m(m-1) gaussians, aggregate m-1.
  RandomStream used(43, 0), fresh(43, 0);
  protocol::disseminate(route, eta, noise, used, DisseminationMode::explicit_messages);
  for (int i = 0; i < 6; ++i) fresh.gaussian();
  CHECK(used.next_u64() == fresh.next_u64());
  RandomStream used2(44, 0), fresh2(44, 0);
  protocol::disseminate(route, eta, noise, used2, DisseminationMode::aggregate_noise);
  for (int i = 0; i < 2; ++i) fresh2.gaussian();
  CHECK(used2.next_u64() == fresh2.next_u64());
}

TEST_CASE("round cost formulas") {
  const Graph g3 = build_grid(3);
  CHECK(protocol::inner_rounds(g3) == 8);       // 4m-4
  CHECK(protocol::round_messages(g3) == 26);    // (m-1)(1+m+m^2)
  const Graph g5 = build_grid(5);
  CHECK(protocol::inner_rounds(g5) == 16);
  CHECK(protocol::round_messages(g5) == 124);
  const Graph c5 = build_cycle(5);
  CHECK(protocol::inner_rounds(c5) == 12);      // 3n-3
  CHECK(protocol::round_messages(c5) == 24);    // n^2-1
  RandomStream rng(51, 0);
  const Graph r = build_rgg(200, 2.0, rng);     // m = 4
  CHECK(protocol::inner_rounds(r) == 12);
  CHECK(protocol::round_messages(r) == 63);
}

TEST_CASE("inner phase covers routes disjointly and reports physical traffic") {
  const Graph grid = build_grid(3);
  std::vector<double> theta = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  RandomStream rng(61, 0);
  const auto outcome =
      protocol::run_inner_phase(grid, theta, NoiseModel::noiseless(), rng, DisseminationMode::aggregate_noise);
  REQUIRE((outcome.zeta == -1 || outcome.zeta == +1));
  CHECK(outcome.routes.size() == 3);
  CHECK(outcome.path_estimates.size() == 9);  // grid routes cover every node
  CHECK(outcome.messages_used == 26);
  std::vector<int> seen(9, 0);
  for (const auto& [node, gamma] : outcome.path_estimates) {
    seen[node] += 1;
    // Noiseless estimates equal the exact route mean.
    if (outcome.zeta == -1) {
      const int row = node / 3;
      CHECK(gamma == doctest::Approx(3.0 * row + 1.0).epsilon(1e-15));
    } else {
      const int col = node % 3;
      CHECK(gamma == doctest::Approx(3.0 + col).epsilon(1e-15));
    }
  }
  for (int s : seen) CHECK(s == 1);

  std::vector<double> short_theta(4, 0.0);
  CHECK_THROWS_AS(protocol::run_inner_phase(grid, short_theta, NoiseModel::noiseless(), rng,
                                            DisseminationMode::aggregate_noise),
                  std::invalid_argument);

  // Traffic accounting does not depend on the dissemination mode.
  RandomStream ra(62, 0), rb(62, 0);
  const auto a = protocol::run_inner_phase(grid, theta, NoiseModel::awgn(1.0), ra,
                                           DisseminationMode::explicit_messages);
  const auto b = protocol::run_inner_phase(grid, theta, NoiseModel::awgn(1.0), rb,
                                           DisseminationMode::aggregate_noise);
  CHECK(a.messages_used == b.messages_used);
}

TEST_CASE("step size schedule and domains") {
  CHECK(protocol::step_size(0, 0.1, 1.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(protocol::step_size(10, 0.1, 1.0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(protocol::step_size(0, 0.1, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(protocol::step_size(0, 0.1, 0.1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(protocol::step_size(90, 0.1, 1.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK_THROWS_AS(protocol::step_size(0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(protocol::step_size(0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(protocol::step_size(0, 0.6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(protocol::step_size(0, 0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(protocol::step_size(0, 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("outer update blends route estimates only") {
  InnerRoundOutcome outcome;
  Route route;
  route.nodes = {0, 2};
  outcome.routes.push_back(route);
  outcome.path_estimates = {{0, 10.0}, {2, 20.0}};

  std::vector<double> theta = {1.0, 2.0, 3.0};
  auto untouched = theta;
  protocol::apply_outer_update(theta, outcome, 0.0);
  CHECK(theta == untouched);

  protocol::apply_outer_update(theta, outcome, 1.0);
  CHECK(theta == std::vector<double>{10.0, 2.0, 20.0});

  theta = {1.0, 2.0, 3.0};
  protocol::apply_outer_update(theta, outcome, 0.25);
  CHECK(theta[0] == std::fma(0.25, 10.0, 0.75 * 1.0));
  CHECK(theta[1] == 2.0);
  CHECK(theta[2] == std::fma(0.25, 20.0, 0.75 * 3.0));

  InnerRoundOutcome bad;
  bad.path_estimates = {{5, 1.0}};
  CHECK_THROWS_AS(protocol::apply_outer_update(theta, bad, 0.5), std::invalid_argument);

  OuterState state;
  state.tau = 0;
  state.theta = {1.0, 2.0, 3.0};
  state.delta = 0.1;
  state.lambda2_hint = 1.0;
  const OuterState next = protocol::outer_update(state, outcome);
  CHECK(next.tau == 1);
  CHECK(next.theta[0] == std::fma(0.1, 10.0, 0.9 * 1.0));
  CHECK(next.theta[1] == 2.0);
}

TEST_CASE("noiseless runs reach consensus and preserve the mean") {
  const Graph g = build_grid(5);
  std::vector<double> theta0(25);
  RandomStream init(71, 0);
  for (auto& v : theta0) v = 1.0 + init.gaussian();
  const double theta_bar = oracle::reference_sum(theta0.data(), theta0.size()) / 25.0;

  ProtocolConfig cfg;
  cfg.delta = 0.1;
  cfg.sigma2 = 0.0;
  cfg.max_outer = 200;
  cfg.lambda2_hint = 0.1;  // epsilon(0) = 1: the first rounds replace values by route means
  RandomStream rng(72, 0);
  const RunTrace trace = protocol::run(g, theta0, cfg, rng);
  const TraceSnapshot& last = trace.snapshots.back();
  CHECK(last.tau == 200);
  CHECK(last.max - last.min < 1e-3);
  CHECK(std::abs(last.mean - theta_bar) <= 1e-12 * std::abs(theta_bar));
  CHECK(trace.theta_bar_init == doctest::Approx(theta_bar).epsilon(1e-14));
}

TEST_CASE("noise keeps contracting under the decaying step size") {
  const Graph g = build_grid(4);
  std::vector<double> theta0(16);
  RandomStream init(81, 0);
  for (auto& v : theta0) v = 1.0 + init.gaussian();
  ProtocolConfig cfg;
  cfg.delta = 0.1;
  cfg.sigma2 = 0.35;
  cfg.max_outer = 1000;
  cfg.record_every = 10;
  int improved = 0;
  const int paths = 100;
  for (int p = 0; p < paths; ++p) {
    RandomStream rng(82, static_cast<std::uint64_t>(p));
    const RunTrace trace = protocol::run(g, theta0, cfg, rng);
    double gap10 = -1.0, gap1000 = -1.0;
    for (const TraceSnapshot& s : trace.snapshots) {
      if (s.tau == 10) gap10 = s.max - s.min;
      if (s.tau == 1000) gap1000 = s.max - s.min;
    }
    REQUIRE(gap10 >= 0.0);
    REQUIRE(gap1000 >= 0.0);
    if (gap1000 < gap10) improved += 1;
  }
  CHECK(improved >= 95);
}

TEST_CASE("snapshot schedule and full-state recording") {
  const Graph g = build_grid(2);
  const std::vector<double> theta0 = {0.0, 1.0, 2.0, 3.0};

  ProtocolConfig cfg;
  cfg.max_outer = 130;
  RandomStream rng(91, 0);
  const RunTrace t = protocol::run(g, theta0, cfg, rng);
  std::vector<std::uint64_t> expected;
  for (std::uint64_t tau = 0; tau <= 130; ++tau) {
    if (tau <= 100 || tau % 10 == 0 || tau == 130) expected.push_back(tau);
  }
  REQUIRE(t.snapshots.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(t.snapshots[k].tau == expected[k]);
    CHECK(t.snapshots[k].transmissions == expected[k] * protocol::round_messages(g));
  }
  CHECK(t.theta_snapshots.empty());

  ProtocolConfig strided = cfg;
  strided.max_outer = 30;
  strided.record_every = 7;
  strided.record_full_theta = true;
  RandomStream rng2(91, 0);
  const RunTrace t2 = protocol::run(g, theta0, strided, rng2);
  const std::vector<std::uint64_t> expected2 = {0, 7, 14, 21, 28, 30};
  REQUIRE(t2.snapshots.size() == expected2.size());
  for (std::size_t k = 0; k < expected2.size(); ++k) CHECK(t2.snapshots[k].tau == expected2[k]);
  REQUIRE(t2.theta_snapshots.size() == expected2.size());
  for (const auto& snap : t2.theta_snapshots) CHECK(snap.size() == 4);
  // The recorded state matches the summary stats.
  const auto& last_theta = t2.theta_snapshots.back();
  const double mean = oracle::reference_sum(last_theta.data(), 4) / 4.0;
  CHECK(t2.snapshots.back().mean == doctest::Approx(mean).epsilon(1e-14));
}

TEST_CASE("runs are reproducible draw for draw") {
  const Graph g = build_grid(3);
  std::vector<double> theta0(9);
  RandomStream init(95, 0);
  for (auto& v : theta0) v = init.gaussian();
  ProtocolConfig cfg;
  cfg.sigma2 = 1.0;
  cfg.max_outer = 50;
  RandomStream r1(96, 5), r2(96, 5);
  const RunTrace a = protocol::run(g, theta0, cfg, r1);
  const RunTrace b = protocol::run(g, theta0, cfg, r2);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    CHECK(a.snapshots[k].mean == b.snapshots[k].mean);
    CHECK(a.snapshots[k].sum_sq_dev_init == b.snapshots[k].sum_sq_dev_init);
    CHECK(a.snapshots[k].min == b.snapshots[k].min);
    CHECK(a.snapshots[k].max == b.snapshots[k].max);
  }
  CHECK(a.seed == 96);
  CHECK(a.stream_id == 5);
}

TEST_CASE("run validates its configuration") {
  const Graph g = build_grid(2);
  const std::vector<double> theta0 = {0.0, 1.0, 2.0, 3.0};
  RandomStream rng(97, 0);
  ProtocolConfig cfg;
  cfg.delta = 0.5;
  CHECK_THROWS_AS(protocol::run(g, theta0, cfg, rng), std::invalid_argument);
  cfg = ProtocolConfig{};
  cfg.max_outer = 0;
  CHECK_THROWS_AS(protocol::run(g, theta0, cfg, rng), std::invalid_argument);
  cfg = ProtocolConfig{};
  cfg.lambda2_hint = 0.0;
  CHECK_THROWS_AS(protocol::run(g, theta0, cfg, rng), std::invalid_argument);
  const std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(protocol::run(g, wrong, ProtocolConfig{}, rng), std::invalid_argument);
}
