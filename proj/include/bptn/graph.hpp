#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace bptn {

struct Edge {
  std::size_t a;  // a < b
  std::size_t b;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DirectedEdge {
  std::size_t from;
  std::size_t to;
};

/// Simple undirected graph with fixed neighbor order (ascending vertex id).
///
/// Directed edges are enumerated vertex by vertex: the edge a->b has id
/// `offset(a) + leg(a, b)`, where `leg(a, b)` is the position of b in a's neighbor list.
/// Site tensors index their virtual legs by the same `leg` positions.
class Graph {
 public:
  Graph() = default;

  /// Validates: vertex ids < n, no self-loops, no duplicate edges.
  static Graph from_edges(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_directed_edges() const { return 2 * edges_.size(); }

  std::span<const std::size_t> neighbors(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const;

  /// Sorted by (a, b) with a < b; position in this list is the undirected edge id.
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(std::size_t a, std::size_t b) const;
  std::size_t edge_id(std::size_t a, std::size_t b) const;

  /// Position of `neighbor` in v's neighbor list; throws if not adjacent.
  std::size_t leg(std::size_t v, std::size_t neighbor) const;

  std::size_t directed_edge_id(std::size_t from, std::size_t to) const;
  DirectedEdge directed_edge(std::size_t id) const { return directed_.at(id); }
  std::size_t reverse(std::size_t id) const { return reverse_.at(id); }
  /// Undirected edge id underlying a directed edge.
  std::size_t undirected(std::size_t id) const { return undirected_.at(id); }
  /// Id of the directed edge leaving v through leg `leg`.
  std::size_t outgoing(std::size_t v, std::size_t leg) const { return offsets_.at(v) + leg; }
  /// Id of the directed edge arriving at v through leg `leg`.
  std::size_t incoming(std::size_t v, std::size_t leg) const { return reverse_[outgoing(v, leg)]; }

  bool is_connected() const;

  friend bool operator==(const Graph& x, const Graph& y) { return x.adjacency_ == y.adjacency_; }

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<DirectedEdge> directed_;
  std::vector<std::size_t> reverse_;
  std::vector<std::size_t> undirected_;
};

// Generators ----------------------------------------------------------------

/// Uniform-ish random r-regular simple graph from the pairing (configuration) model.
/// Rejects and redraws on self-loops or multi-edges, giving up after 1000 attempts.
Graph random_regular(std::size_t n, std::size_t r, std::uint64_t seed);

/// Vertex v > 0 hangs off parent (v - 1) / branching (breadth-first complete tree).
Graph build_tree(std::size_t n, std::size_t branching);

Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// Center 0 plus `leaves` leaves.
Graph star_graph(std::size_t leaves);
Graph square_lattice(std::size_t rows, std::size_t cols, bool periodic);

// Diagnostics -----------------------------------------------------------------

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

bool is_tree(const Graph& g);

/// Number of distinct simple cycles of each length 3..max_len. max_len must be <= 12.
std::map<std::size_t, std::uint64_t> count_cycles(const Graph& g, std::size_t max_len);

/// min over nonempty S with |S| <= N/2 of (edges leaving S) / |S|, by scanning all subsets.
/// Requires 2 <= N <= 20.
Rational expansion_bruteforce(const Graph& g);

/// Longest shortest-path distance, or nullopt for a disconnected graph.
std::optional<std::size_t> diameter(const Graph& g);

struct GraphDiagnostics {
  std::map<std::size_t, std::size_t> degree_histogram;
  std::map<std::size_t, std::uint64_t> cycle_counts;
  std::optional<Rational> expansion;  // only when N <= 20
  std::optional<std::size_t> diameter;
  bool tree = false;
};

GraphDiagnostics diagnose(const Graph& g, std::size_t max_cycle_len);

// Serialization ---------------------------------------------------------------

nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

}  // namespace bptn
