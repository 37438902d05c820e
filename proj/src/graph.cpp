#include "netavg/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

namespace netavg {

std::string topology_tag(Topology t) {
  switch (t) {
    case Topology::cycle: return "cycle";
    case Topology::grid2d: return "grid2d";
    case Topology::rgg: return "rgg";
  }
  throw std::invalid_argument("topology_tag: unknown topology");
}

Topology topology_from_tag(const std::string& tag) {
  if (tag == "cycle") return Topology::cycle;
  if (tag == "grid2d") return Topology::grid2d;
  if (tag == "rgg") return Topology::rgg;
  throw std::invalid_argument("unknown topology tag: " + tag);
}

namespace {

void check(bool cond, const char* what) {
  if (!cond) throw std::logic_error(std::string("graph invariant violated: ") + what);
}

void finalize_edges(Graph& g) {
  std::sort(g.edges.begin(), g.edges.end());
  g.adj.assign(static_cast<std::size_t>(g.n), {});
  for (auto [u, v] : g.edges) {
    g.adj[static_cast<std::size_t>(u)].push_back(v);
    g.adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
}

// Hop distances from src; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, int src) {
  std::vector<int> dist(static_cast<std::size_t>(g.n), -1);
  std::deque<int> queue{src};
  dist[static_cast<std::size_t>(src)] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

bool squares_edge_adjacent(SquareIndex a, SquareIndex b) {
  return std::abs(a.i - b.i) + std::abs(a.j - b.j) == 1;
}

}  // namespace

int Graph::min_square_occupancy() const {
  std::size_t best = square_nodes.empty() ? 0 : square_nodes[0].size();
  for (const auto& s : square_nodes) best = std::min(best, s.size());
  return static_cast<int>(best);
}

int Graph::max_square_occupancy() const {
  std::size_t best = 0;
  for (const auto& s : square_nodes) best = std::max(best, s.size());
  return static_cast<int>(best);
}

void Graph::validate() const {
  check(n >= 1, "positive node count");
  check(squares_x >= 1 && squares_y >= 1, "positive partition dims");
  check(square_of.size() == static_cast<std::size_t>(n), "square_of covers all nodes");
  check(square_nodes.size() == static_cast<std::size_t>(square_count()), "square list size");
  check(adj.size() == static_cast<std::size_t>(n), "adjacency size");

  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int slot = 0; slot < square_count(); ++slot) {
    for (int v : square_nodes[static_cast<std::size_t>(slot)]) {
      check(v >= 0 && v < n, "square member in range");
      check(square_slot(square_of[static_cast<std::size_t>(v)]) == slot, "square_of matches square_nodes");
      ++seen[static_cast<std::size_t>(v)];
    }
  }
  for (int c : seen) check(c == 1, "partition covers each node exactly once");

  std::set<std::pair<int, int>> edge_set;
  for (auto [u, v] : edges) {
    check(u >= 0 && v >= 0 && u < n && v < n, "edge endpoints in range");
    check(u < v, "edges stored with u < v");
    check(edge_set.insert({u, v}).second, "no duplicate edges");
  }
  std::size_t degree_total = 0;
  for (int u = 0; u < n; ++u) {
    const auto& nb = adj[static_cast<std::size_t>(u)];
    degree_total += nb.size();
    check(std::is_sorted(nb.begin(), nb.end()), "sorted adjacency");
    for (int v : nb) {
      check(v != u, "no self edges");
      check(edge_set.count({std::min(u, v), std::max(u, v)}) == 1, "adjacency matches edge set");
    }
  }
  check(degree_total == 2 * edges.size(), "edge symmetry");

  switch (topology) {
    case Topology::cycle: {
      check(n >= 3, "cycle size");
      check(m == n && squares_x == 1 && squares_y == n, "cycle degenerate partition");
      for (int v = 0; v < n; ++v) {
        check(adj[static_cast<std::size_t>(v)].size() == 2, "cycle degree 2");
        check(square_of[static_cast<std::size_t>(v)].i == 1 && square_of[static_cast<std::size_t>(v)].j == v + 1,
              "cycle square convention");
      }
      for (int k = 0; k < n; ++k) {
        const int a = std::min(k, (k + 1) % n);
        const int b = std::max(k, (k + 1) % n);
        check(edge_set.count({a, b}) == 1, "cycle ring edges present");
      }
      check(edges.size() == static_cast<std::size_t>(n), "cycle edge count");
      break;
    }
    case Topology::grid2d: {
      check(m >= 2 && n == m * m, "grid node count");
      check(squares_x == m && squares_y == m, "grid partition dims");
      for (const auto& sq : square_nodes) check(sq.size() == 1, "one node per grid square");
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          const bool adj_sq = squares_edge_adjacent(square_of[static_cast<std::size_t>(u)],
                                                    square_of[static_cast<std::size_t>(v)]);
          check(adj_sq == (edge_set.count({u, v}) == 1), "grid four-neighbor adjacency");
        }
      }
      break;
    }
    case Topology::rgg: {
      check(m >= 2 && squares_x == m && squares_y == m, "rgg partition dims");
      check(positions.size() == static_cast<std::size_t>(n), "rgg positions present");
      for (const auto& p : positions) {
        check(p[0] >= 0.0 && p[0] <= 1.0 && p[1] >= 0.0 && p[1] <= 1.0, "positions in unit square");
      }
      for (const auto& sq : square_nodes) check(!sq.empty(), "rgg regularity");
      for (int u = 0; u < n; ++u) {
        const SquareIndex su = square_of[static_cast<std::size_t>(u)];
        for (int v = u + 1; v < n; ++v) {
          const SquareIndex sv = square_of[static_cast<std::size_t>(v)];
          const bool should = (su == sv) || squares_edge_adjacent(su, sv);
          check(should == (edge_set.count({u, v}) == 1), "rgg square adjacency rule");
        }
      }
      break;
    }
  }
}

Graph build_cycle(int n) {
  if (n < 3) throw std::invalid_argument("build_cycle: n must be >= 3");
  Graph g;
  g.n = n;
  g.topology = Topology::cycle;
  g.m = n;
  g.squares_x = 1;
  g.squares_y = n;
  g.square_of.resize(static_cast<std::size_t>(n));
  g.square_nodes.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    g.square_of[static_cast<std::size_t>(k)] = SquareIndex{1, k + 1};
    g.square_nodes[static_cast<std::size_t>(k)] = {k};
  }
  for (int k = 0; k < n; ++k) {
    const int next = (k + 1) % n;
    g.edges.emplace_back(std::min(k, next), std::max(k, next));
  }
  finalize_edges(g);
  g.validate();
  return g;
}

Graph build_grid(int m) {
  if (m < 2) throw std::invalid_argument("build_grid: m must be >= 2");
  Graph g;
  g.n = m * m;
  g.topology = Topology::grid2d;
  g.m = m;
  g.squares_x = m;
  g.squares_y = m;
  g.square_of.resize(static_cast<std::size_t>(g.n));
  g.square_nodes.resize(static_cast<std::size_t>(g.n));
  g.positions.resize(static_cast<std::size_t>(g.n));
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= m; ++i) {
      const int id = (j - 1) * m + (i - 1);
      g.square_of[static_cast<std::size_t>(id)] = SquareIndex{i, j};
      g.square_nodes[static_cast<std::size_t>((j - 1) * m + (i - 1))] = {id};
      g.positions[static_cast<std::size_t>(id)] = {(i - 0.5) / m, (j - 0.5) / m};
      if (i < m) g.edges.emplace_back(id, id + 1);
      if (j < m) g.edges.emplace_back(id, id + m);
    }
  }
  finalize_edges(g);
  g.validate();
  return g;
}

int rgg_squares_per_side(int n, double c) {
  if (n < 2) throw std::invalid_argument("build_rgg: n must be >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("build_rgg: c must be > 0");
  return static_cast<int>(std::floor(std::sqrt(n / (c * std::log(n)))));
}

Graph build_rgg(int n, double c, RandomStream& rng, int max_retries) {
  const int m = rgg_squares_per_side(n, c);
  if (m < 2) throw std::invalid_argument("build_rgg: partition resolves below 2x2; lower c or raise n");
  if (max_retries < 1) throw std::invalid_argument("build_rgg: max_retries must be >= 1");
  const double side = std::sqrt(c * std::log(n) / n);

  Graph g;
  g.n = n;
  g.topology = Topology::rgg;
  g.m = m;
  g.squares_x = m;
  g.squares_y = m;

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    g.positions.assign(static_cast<std::size_t>(n), {});
    g.square_of.assign(static_cast<std::size_t>(n), {});
    g.square_nodes.assign(static_cast<std::size_t>(m * m), {});
    for (int v = 0; v < n; ++v) {
      const double x = rng.uniform01();
      const double y = rng.uniform01();
      // Cells have the theoretical side; the last row/column also covers
      // whatever the m cells leave uncovered.
      const int i = std::min(static_cast<int>(x / side) + 1, m);
      const int j = std::min(static_cast<int>(y / side) + 1, m);
      g.positions[static_cast<std::size_t>(v)] = {x, y};
      g.square_of[static_cast<std::size_t>(v)] = SquareIndex{i, j};
      g.square_nodes[static_cast<std::size_t>((j - 1) * m + (i - 1))].push_back(v);
    }
    const bool regular = std::none_of(g.square_nodes.begin(), g.square_nodes.end(),
                                      [](const auto& s) { return s.empty(); });
    if (!regular) continue;

    g.edges.clear();
    for (int j = 1; j <= m; ++j) {
      for (int i = 1; i <= m; ++i) {
        const auto& here = g.nodes_in_square({i, j});
        for (std::size_t a = 0; a < here.size(); ++a)
          for (std::size_t b = a + 1; b < here.size(); ++b)
            g.edges.emplace_back(std::min(here[a], here[b]), std::max(here[a], here[b]));
        for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
          if (i + di > m || j + dj > m) continue;
          for (int u : here)
            for (int v : g.nodes_in_square({i + di, j + dj}))
              g.edges.emplace_back(std::min(u, v), std::max(u, v));
        }
      }
    }
    finalize_edges(g);
    g.validate();
    return g;
  }
  throw RegularityFailure("build_rgg: empty square after " + std::to_string(max_retries) +
                          " draws; raise c or n");
}

int diameter(const Graph& g) {
  int best = 0;
  for (int src = 0; src < g.n; ++src) {
    const auto dist = bfs_distances(g, src);
    for (int d : dist) {
      if (d < 0) throw DisconnectedGraph("diameter: graph is disconnected");
      best = std::max(best, d);
    }
  }
  return best;
}

int spread_function(const Graph& g, int t) {
  if (t < 0) throw std::invalid_argument("spread_function: t must be >= 0");
  int best = g.n;
  for (int src = 0; src < g.n; ++src) {
    const auto dist = bfs_distances(g, src);
    int count = 0;
    for (int d : dist) {
      if (d < 0) throw DisconnectedGraph("spread_function: graph is disconnected");
      if (d <= t) ++count;
    }
    best = std::min(best, count);
  }
  return best;
}

namespace {

void append_double(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw std::invalid_argument("edge list: bad real number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw std::invalid_argument("edge list: bad integer '" + tok + "'");
  return v;
}

}  // namespace

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.n << ' ' << g.m << ' ' << topology_tag(g.topology) << '\n';
  for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
  if (g.has_positions()) {
    for (int v = 0; v < g.n; ++v) {
      std::string line = std::to_string(v);
      line += ' ';
      append_double(line, g.positions[static_cast<std::size_t>(v)][0]);
      line += ' ';
      append_double(line, g.positions[static_cast<std::size_t>(v)][1]);
      const SquareIndex s = g.square_of[static_cast<std::size_t>(v)];
      line += ' ';
      line += std::to_string(s.i);
      line += ' ';
      line += std::to_string(s.j);
      out << line << '\n';
    }
  }
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty() || toks[0][0] == '#') continue;
    rows.push_back(std::move(toks));
  }
  if (rows.empty()) throw std::invalid_argument("edge list: empty input");
  if (rows[0].size() != 3) throw std::invalid_argument("edge list: header must be 'n m topology'");

  Graph g;
  g.n = parse_int(rows[0][0]);
  g.m = parse_int(rows[0][1]);
  g.topology = topology_from_tag(rows[0][2]);
  if (g.n < 1) throw std::invalid_argument("edge list: bad node count");
  if (g.topology == Topology::cycle) {
    g.squares_x = 1;
    g.squares_y = g.n;
  } else {
    g.squares_x = g.m;
    g.squares_y = g.m;
  }

  bool saw_node_records = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& toks = rows[r];
    if (toks.size() == 2) {
      if (saw_node_records) throw std::invalid_argument("edge list: edges must precede node records");
      const int u = parse_int(toks[0]);
      const int v = parse_int(toks[1]);
      if (u < 0 || v < 0 || u >= g.n || v >= g.n || u == v)
        throw std::invalid_argument("edge list: bad edge " + toks[0] + " " + toks[1]);
      g.edges.emplace_back(std::min(u, v), std::max(u, v));
    } else if (toks.size() == 5) {
      if (!saw_node_records) {
        saw_node_records = true;
        g.positions.assign(static_cast<std::size_t>(g.n), {});
        g.square_of.assign(static_cast<std::size_t>(g.n), {});
      }
      const int v = parse_int(toks[0]);
      if (v < 0 || v >= g.n) throw std::invalid_argument("edge list: node record id out of range");
      g.positions[static_cast<std::size_t>(v)] = {parse_double(toks[1]), parse_double(toks[2])};
      g.square_of[static_cast<std::size_t>(v)] = SquareIndex{parse_int(toks[3]), parse_int(toks[4])};
    } else {
      throw std::invalid_argument("edge list: line must have 2 (edge) or 5 (node) fields");
    }
  }

  if (g.topology == Topology::cycle) {
    // The degenerate partition is a fixed convention, never serialized.
    g.positions.clear();
    g.square_of.resize(static_cast<std::size_t>(g.n));
    for (int k = 0; k < g.n; ++k) g.square_of[static_cast<std::size_t>(k)] = SquareIndex{1, k + 1};
  } else if (!saw_node_records) {
    throw std::invalid_argument("edge list: " + topology_tag(g.topology) + " requires node records");
  }

  g.square_nodes.assign(static_cast<std::size_t>(g.square_count()), {});
  for (int v = 0; v < g.n; ++v) {
    g.square_nodes[static_cast<std::size_t>(g.square_slot(g.square_of[static_cast<std::size_t>(v)]))]
        .push_back(v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  finalize_edges(g);
  g.validate();
  return g;
}

}  // namespace netavg
