#include "bptn/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <queue>

#include "bptn/error.hpp"
#include "bptn/random.hpp"

namespace bptn {

Graph Graph::from_edges(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  if (n == 0) throw InvalidInput("graph must have at least one vertex");
  Graph g;
  g.adjacency_.assign(n, {});
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw InvalidInput("edge endpoint out of range");
    if (a == b) throw InvalidInput("self-loop at vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
    g.edges_.push_back({a, b});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  if (std::adjacent_find(g.edges_.begin(), g.edges_.end()) != g.edges_.end()) {
    throw InvalidInput("duplicate edge");
  }
  for (const auto& e : g.edges_) {
    g.adjacency_[e.a].push_back(e.b);
    g.adjacency_[e.b].push_back(e.a);
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());

  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + g.adjacency_[v].size();
  g.directed_.resize(g.offsets_[n]);
  g.reverse_.resize(g.offsets_[n]);
  g.undirected_.resize(g.offsets_[n]);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t l = 0; l < g.adjacency_[v].size(); ++l) {
      const std::size_t w = g.adjacency_[v][l];
      const std::size_t id = g.offsets_[v] + l;
      g.directed_[id] = {v, w};
      g.reverse_[id] = g.offsets_[w] + g.leg(w, v);
      g.undirected_[id] = g.edge_id(v, w);
    }
  }
  return g;
}

std::size_t Graph::max_degree() const {
  std::size_t m = 0;
  for (const auto& nbrs : adjacency_) m = std::max(m, nbrs.size());
  return m;
}

bool Graph::has_edge(std::size_t a, std::size_t b) const {
  if (a >= num_vertices() || b >= num_vertices()) return false;
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::size_t Graph::edge_id(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, b});
  if (it == edges_.end() || *it != Edge{a, b}) {
    throw InvalidInput("no edge between " + std::to_string(a) + " and " + std::to_string(b));
  }
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t Graph::leg(std::size_t v, std::size_t neighbor) const {
  const auto& nbrs = adjacency_.at(v);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), neighbor);
  if (it == nbrs.end() || *it != neighbor) {
    throw InvalidInput("vertex " + std::to_string(neighbor) + " is not a neighbor of " + std::to_string(v));
  }
  return static_cast<std::size_t>(it - nbrs.begin());
}

std::size_t Graph::directed_edge_id(std::size_t from, std::size_t to) const {
  return offsets_.at(from) + leg(from, to);
}

bool Graph::is_connected() const {
  const std::size_t n = num_vertices();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (auto w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

// ---------------------------------------------------------------------------

Graph random_regular(std::size_t n, std::size_t r, std::uint64_t seed) {
  if (n == 0 || r == 0) throw InvalidInput("random_regular: n and r must be positive");
  if ((n * r) % 2 != 0) throw InvalidInput("n*r must be even");
  if (r >= n) throw InvalidInput("random_regular: r must be smaller than n");

  constexpr int kMaxAttempts = 1000;
  Rng rng(seed);
  std::vector<std::size_t> stubs(n * r);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = i / r;
    for (std::size_t i = stubs.size() - 1; i > 0; --i) {
      std::swap(stubs[i], stubs[rng.below(i + 1)]);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(stubs.size() / 2);
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      auto [a, b] = std::minmax(stubs[i], stubs[i + 1]);
      simple = a != b;
      pairs.emplace_back(a, b);
    }
    if (!simple) continue;
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) continue;
    return Graph::from_edges(n, std::move(pairs));
  }
  throw NumericalFailure("random_regular: no simple pairing found after 1000 attempts");
}

Graph build_tree(std::size_t n, std::size_t branching) {
  if (n == 0) throw InvalidInput("build_tree: n must be positive");
  if (branching == 0) throw InvalidInput("build_tree: branching must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 1; v < n; ++v) edges.emplace_back((v - 1) / branching, v);
  return Graph::from_edges(n, std::move(edges));
}

Graph path_graph(std::size_t n) { return build_tree(n, 1); }

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidInput("cycle_graph: need at least 3 vertices");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, std::move(edges));
}

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return Graph::from_edges(n, std::move(edges));
}

Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, std::move(edges));
}

Graph square_lattice(std::size_t rows, std::size_t cols, bool periodic) {
  if (rows == 0 || cols == 0) throw InvalidInput("square_lattice: empty lattice");
  if (periodic && (rows < 3 || cols < 3)) {
    throw InvalidInput("square_lattice: periodic lattice needs at least 3x3 sites");
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      else if (periodic) edges.emplace_back(id(r, c), id(r, 0));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
      else if (periodic) edges.emplace_back(id(r, c), id(0, c));
    }
  }
  return Graph::from_edges(rows * cols, std::move(edges));
}

// ---------------------------------------------------------------------------

bool is_tree(const Graph& g) { return g.num_edges() + 1 == g.num_vertices() && g.is_connected(); }

namespace {

// Counts cycles through `start` whose other vertices all exceed `start`. Each cycle is
// visited once per direction; only the direction with path[1] < path.back() is kept.
void extend_cycles(const Graph& g, std::vector<std::size_t>& path, std::vector<bool>& on_path,
                   std::size_t max_len, std::map<std::size_t, std::uint64_t>& counts) {
  const std::size_t start = path.front();
  const std::size_t tail = path.back();
  for (auto w : g.neighbors(tail)) {
    if (w == start) {
      if (path.size() >= 3 && path[1] < path.back()) ++counts[path.size()];
      continue;
    }
    if (w < start || on_path[w] || path.size() >= max_len) continue;
    on_path[w] = true;
    path.push_back(w);
    extend_cycles(g, path, on_path, max_len, counts);
    path.pop_back();
    on_path[w] = false;
  }
}

}  // namespace

std::map<std::size_t, std::uint64_t> count_cycles(const Graph& g, std::size_t max_len) {
  if (max_len > 12) throw InvalidInput("count_cycles: max_len must be <= 12");
  std::map<std::size_t, std::uint64_t> counts;
  for (std::size_t len = 3; len <= max_len; ++len) counts[len] = 0;
  if (max_len < 3) return counts;
  std::vector<bool> on_path(g.num_vertices(), false);
  std::vector<std::size_t> path;
  for (std::size_t s = 0; s < g.num_vertices(); ++s) {
    path.assign(1, s);
    on_path[s] = true;
    extend_cycles(g, path, on_path, max_len, counts);
    on_path[s] = false;
  }
  return counts;
}

Rational expansion_bruteforce(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > 20) throw InvalidInput("expansion_bruteforce: graph too large (N > 20)");
  if (n < 2) throw InvalidInput("expansion_bruteforce: need at least 2 vertices");
  std::vector<std::uint32_t> nbr_mask(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (auto w : g.neighbors(v)) nbr_mask[v] |= (1u << w);

  Rational best{UINT64_MAX, 1};
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const auto size = static_cast<std::uint64_t>(std::popcount(s));
    if (2 * size > n) continue;
    std::uint64_t cut = 0;
    for (std::uint32_t rest = s; rest != 0; rest &= rest - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(rest));
      cut += static_cast<std::uint64_t>(std::popcount(nbr_mask[v] & ~s));
    }
    if (best.num == UINT64_MAX || cut * best.den < best.num * size) best = {cut, size};
  }
  const std::uint64_t d = std::gcd(best.num, best.den);
  if (d > 1) best = {best.num / d, best.den / d};
  if (best.num == 0) best.den = 1;
  return best;
}

std::optional<std::size_t> diameter(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::size_t best = 0;
  std::vector<std::size_t> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    std::size_t reached = 1;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (auto w : g.neighbors(v)) {
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[v] + 1;
          best = std::max(best, dist[w]);
          ++reached;
          q.push(w);
        }
      }
    }
    if (reached != n) return std::nullopt;
  }
  return best;
}

GraphDiagnostics diagnose(const Graph& g, std::size_t max_cycle_len) {
  GraphDiagnostics d;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) ++d.degree_histogram[g.degree(v)];
  d.cycle_counts = count_cycles(g, max_cycle_len);
  if (g.num_vertices() >= 2 && g.num_vertices() <= 20) d.expansion = expansion_bruteforce(g);
  d.diameter = diameter(g);
  d.tree = is_tree(g);
  return d;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.a, e.b});
  return {{"n", g.num_vertices()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InvalidInput("graph JSON: edges must be pairs");
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    return Graph::from_edges(n, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("graph JSON: ") + e.what());
  }
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open graph file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("graph file " + path + ": " + e.what());
  }
  return graph_from_json(j);
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write graph file " + path);
  out << to_json(g).dump() << '\n';
}

}  // namespace bptn
