#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <netavg/graph.hpp>
#include <netavg/rng.hpp>

#include "support/oracles.hpp"

using namespace netavg;

TEST_CASE("topology tags round-trip") {
  for (Topology t : {Topology::cycle, Topology::grid2d, Topology::rgg})
    CHECK(topology_from_tag(topology_tag(t)) == t);
  CHECK_THROWS_AS(topology_from_tag("torus"), std::invalid_argument);
}

TEST_CASE("cycle structure") {
  const Graph g = build_cycle(5);
  CHECK(g.n == 5);
  CHECK(g.m == 5);
  CHECK(g.squares_x == 1);
  CHECK(g.squares_y == 5);
  CHECK_FALSE(g.has_positions());
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}};
  CHECK(g.edges == expected);
  for (int k = 0; k < 5; ++k) {
    CHECK(g.square_of[k] == SquareIndex{1, k + 1});
    CHECK(g.nodes_in_square({1, k + 1}) == std::vector<int>{k});
    CHECK(g.adj[k].size() == 2);
  }
  CHECK(g.min_square_occupancy() == 1);
  CHECK(g.max_square_occupancy() == 1);
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS(build_cycle(2), std::invalid_argument);

  const Graph g3 = build_cycle(3);
  const std::vector<std::pair<int, int>> expected3 = {{0, 1}, {0, 2}, {1, 2}};
  CHECK(g3.edges == expected3);
}

TEST_CASE("cycle diameters match floor(n/2) and the all-pairs oracle") {
  for (int n = 3; n <= 64; ++n) {
    const Graph g = build_cycle(n);
    CHECK(diameter(g) == n / 2);
  }
  for (int n : {3, 4, 5, 6, 7, 8, 9, 16, 17}) {
    const Graph g = build_cycle(n);
    const auto d = oracle::all_pairs_distances(n, g.edges);
    int best = 0;
    for (const auto& row : d)
      for (int v : row) best = std::max(best, v);
    CHECK(diameter(g) == best);
  }
}

TEST_CASE("grid structure") {
  const Graph g = build_grid(3);
  CHECK(g.n == 9);
  CHECK(g.m == 3);
  CHECK(g.has_positions());
  CHECK(g.edges.size() == 12);  // 2*m*(m-1)
  // id = (j-1)*m + (i-1)
  CHECK(g.square_of[0] == SquareIndex{1, 1});
  CHECK(g.square_of[2] == SquareIndex{3, 1});
  CHECK(g.square_of[4] == SquareIndex{2, 2});
  CHECK(g.square_of[8] == SquareIndex{3, 3});
  CHECK(g.nodes_in_square({2, 2}) == std::vector<int>{4});
  // Positions sit at cell centers.
  CHECK(g.positions[0][0] == doctest::Approx(0.5 / 3));
  CHECK(g.positions[0][1] == doctest::Approx(0.5 / 3));
  CHECK(g.positions[8][0] == doctest::Approx(2.5 / 3));
  // Corner degree 2, center degree 4.
  CHECK(g.adj[0].size() == 2);
  CHECK(g.adj[4].size() == 4);
  CHECK(g.adj[0] == std::vector<int>{1, 3});
  // No diagonal adjacency.
  const Graph g2 = build_grid(2);
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  CHECK(g2.edges == expected);
  CHECK_THROWS_AS(build_grid(1), std::invalid_argument);
}

TEST_CASE("grid diameters match 2(m-1) and the all-pairs oracle") {
  for (int m = 2; m <= 12; ++m) CHECK(diameter(build_grid(m)) == 2 * (m - 1));
  for (int m : {2, 3, 4, 5, 6}) {
    const Graph g = build_grid(m);
    const auto d = oracle::all_pairs_distances(g.n, g.edges);
    int best = 0;
    for (const auto& row : d)
      for (int v : row) best = std::max(best, v);
    CHECK(diameter(g) == best);
  }
}

TEST_CASE("spread function counts closed balls and grows with t") {
  const Graph c8 = build_cycle(8);
  CHECK(spread_function(c8, 0) == 1);
  CHECK(spread_function(c8, 1) == 3);
  CHECK(spread_function(c8, 4) == 8);
  const Graph g3 = build_grid(3);
  CHECK(spread_function(g3, 0) == 1);
  CHECK(spread_function(g3, 1) == 3);  // corners have two neighbors
  CHECK(spread_function(g3, diameter(g3)) == 9);
  int prev = 0;
  for (int t = 0; t <= 5; ++t) {
    const int s = spread_function(build_cycle(9), t);
    CHECK(s >= prev);
    prev = s;
  }
  CHECK_THROWS_AS(spread_function(g3, -1), std::invalid_argument);
}

TEST_CASE("square_slot range checks") {
  const Graph g = build_grid(3);
  CHECK_THROWS_AS(g.square_slot({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(g.square_slot({1, 4}), std::invalid_argument);
  CHECK(g.square_slot({1, 1}) == 0);
  CHECK(g.square_slot({3, 3}) == 8);
}

TEST_CASE("rgg partition arithmetic") {
  CHECK(rgg_squares_per_side(200, 2.0) == 4);
  CHECK(rgg_squares_per_side(900, 2.0) == 8);
  CHECK_THROWS_AS(rgg_squares_per_side(1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(rgg_squares_per_side(100, 0.0), std::invalid_argument);
}

TEST_CASE("rgg construction is regular, connected, and deterministic") {
  RandomStream rng(101, 0);
  const Graph g = build_rgg(200, 2.0, rng);
  CHECK(g.n == 200);
  CHECK(g.m == 4);
  CHECK(g.has_positions());
  CHECK(g.min_square_occupancy() >= 1);
  CHECK_NOTHROW(g.validate());
  const int d = diameter(g);  // throws DisconnectedGraph if disconnected
  CHECK(d >= 1);
  CHECK(d <= 2 * g.m);

  RandomStream rng2(101, 0);
  const Graph h = build_rgg(200, 2.0, rng2);
  CHECK(g.edges == h.edges);
  CHECK(g.positions == h.positions);

  RandomStream rng3(102, 0);
  const Graph k = build_rgg(200, 2.0, rng3);
  CHECK(g.positions != k.positions);
}

TEST_CASE("rgg edges follow the same-or-adjacent-square rule, recomputed from positions") {
  RandomStream rng(7, 0);
  const Graph g = build_rgg(150, 2.0, rng);
  const double side = std::sqrt(2.0 * std::log(150.0) / 150.0);
  std::set<std::pair<int, int>> expected;
  std::vector<SquareIndex> sq(g.n);
  for (int v = 0; v < g.n; ++v) {
    const int i = std::min(static_cast<int>(g.positions[v][0] / side) + 1, g.m);
    const int j = std::min(static_cast<int>(g.positions[v][1] / side) + 1, g.m);
    sq[v] = SquareIndex{i, j};
    CHECK(g.square_of[v] == sq[v]);
  }
  for (int u = 0; u < g.n; ++u) {
    for (int v = u + 1; v < g.n; ++v) {
      const int manhattan = std::abs(sq[u].i - sq[v].i) + std::abs(sq[u].j - sq[v].j);
      if (manhattan <= 1) expected.insert({u, v});
    }
  }
  const std::set<std::pair<int, int>> actual(g.edges.begin(), g.edges.end());
  CHECK(actual == expected);
}

TEST_CASE("rgg reports irreparably empty squares") {
  // c = 0.01 forces far more squares than nodes, so every redraw fails.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomStream rng(seed, 0);
    CHECK_THROWS_AS(build_rgg(50, 0.01, rng, 20), RegularityFailure);
  }
  RandomStream rng(1, 0);
  CHECK_THROWS_AS(build_rgg(100, 50.0, rng), std::invalid_argument);  // partition below 2x2
  RandomStream rng2(1, 0);
  CHECK_THROWS_AS(build_rgg(200, 2.0, rng2, 0), std::invalid_argument);
}

TEST_CASE("edge list round-trips byte for byte") {
  for (const Graph& g : {build_cycle(7), build_grid(3)}) {
    std::ostringstream first;
    write_edge_list(g, first);
    std::istringstream in(first.str());
    const Graph back = read_edge_list(in);
    CHECK(back.n == g.n);
    CHECK(back.topology == g.topology);
    CHECK(back.edges == g.edges);
    CHECK(back.square_of == g.square_of);
    std::ostringstream second;
    write_edge_list(back, second);
    CHECK(first.str() == second.str());
  }
  RandomStream rng(55, 0);
  const Graph g = build_rgg(120, 2.0, rng);
  std::ostringstream first;
  write_edge_list(g, first);
  std::istringstream in(first.str());
  const Graph back = read_edge_list(in);
  CHECK(back.positions == g.positions);
  CHECK(back.edges == g.edges);
  std::ostringstream second;
  write_edge_list(back, second);
  CHECK(first.str() == second.str());
}

TEST_CASE("edge list rejects malformed input") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_edge_list(in);
  };
  CHECK_THROWS_AS(parse(""), std::invalid_argument);
  CHECK_THROWS_AS(parse("3 3\n"), std::invalid_argument);            // short header
  CHECK_THROWS_AS(parse("4 2 grid2d\n0 1\n"), std::invalid_argument);  // grid needs node records
  CHECK_THROWS_AS(parse("3 3 cycle\n0 x\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("3 3 cycle\n0 1\n1 2\n0 9\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse("3 3 ring\n0 1\n1 2\n0 2\n"), std::invalid_argument);
  // A structurally wrong cycle fails validation even if well-formed.
  CHECK_THROWS_AS(parse("4 4 cycle\n0 1\n1 2\n2 3\n0 2\n0 3\n"), std::logic_error);
  // Comments and reordered edges are tolerated.
  std::istringstream ok("# comment\n3 3 cycle\n1 2\n0 1\n0 2\n");
  const Graph g = read_edge_list(ok);
  CHECK(g.n == 3);
  CHECK(g.edges.size() == 3);
}
