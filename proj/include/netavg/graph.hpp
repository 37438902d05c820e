#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netavg/rng.hpp"

namespace netavg {

enum class Topology { cycle, grid2d, rgg };

std::string topology_tag(Topology t);
Topology topology_from_tag(const std::string& tag);

// 1-based square coordinates; (1,1) is the bottom-left square.
struct SquareIndex {
  int i = 1;  // column
  int j = 1;  // row

  friend bool operator==(const SquareIndex&, const SquareIndex&) = default;
};

struct RegularityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DisconnectedGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedTopology : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Undirected graph over a square partition of the unit square. Immutable
// after construction; safe to share read-only across simulation workers.
//
// The cycle is given a degenerate 1-column partition (square (1, k+1) holds
// node k) so the routing code can treat all topologies uniformly.
struct Graph {
  int n = 0;
  Topology topology = Topology::cycle;
  int m = 0;          // squares per side (cycle: m == n by convention)
  int squares_x = 0;  // partition width in squares (cycle: 1)
  int squares_y = 0;  // partition height in squares (cycle: n)
  std::vector<std::pair<int, int>> edges;       // u < v, lexicographic
  std::vector<std::vector<int>> adj;            // sorted neighbor lists
  std::vector<std::array<double, 2>> positions; // empty when not geometric
  std::vector<SquareIndex> square_of;
  std::vector<std::vector<int>> square_nodes;   // construction order per square

  bool has_positions() const { return !positions.empty(); }

  int square_count() const { return squares_x * squares_y; }

  int square_slot(SquareIndex s) const {
    if (s.i < 1 || s.i > squares_x || s.j < 1 || s.j > squares_y)
      throw std::invalid_argument("Graph: square index out of range");
    return (s.j - 1) * squares_x + (s.i - 1);
  }

  const std::vector<int>& nodes_in_square(SquareIndex s) const {
    return square_nodes[static_cast<std::size_t>(square_slot(s))];
  }

  int min_square_occupancy() const;
  int max_square_occupancy() const;

  // Internal consistency: edge symmetry, no self edges, partition covers
  // every node exactly once, topology-specific structure. Throws
  // std::logic_error on violation; every builder and importer runs it.
  void validate() const;
};

Graph build_cycle(int n);
Graph build_grid(int m);

// Places n uniform points, partitions into m x m cells of side
// sqrt(c*ln(n)/n) (the last row/column absorbs rounding slack), and connects
// all pairs in identical or edge-adjacent cells. Draws with an empty cell are
// rejected and redrawn from the same stream.
Graph build_rgg(int n, double c, RandomStream& rng, int max_retries = 20);

int rgg_squares_per_side(int n, double c);

int diameter(const Graph& g);

// Minimum over nodes of |{v : dist(v, node) <= t}|; counts the node itself.
int spread_function(const Graph& g, int t);

// Plain-text archive: header "n m topology_tag", one "u v" line per edge,
// then "node x y square_i square_j" records for geometric topologies.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);

}  // namespace netavg
