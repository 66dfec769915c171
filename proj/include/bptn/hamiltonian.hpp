#pragma once

#include <string>
#include <vector>

#include "bptn/graph.hpp"
#include "bptn/tensor.hpp"

namespace bptn {

/// H = sum over edges h_ab + sum over vertices h_a.
///
/// Edge term `e` acts on (a, b) = graph.edges()[e] with a < b, and a is the left tensor
/// factor of the d^2 x d^2 matrix.
class Hamiltonian {
 public:
  Hamiltonian(Graph graph, std::vector<Matrix> edge_terms, std::vector<Matrix> vertex_terms);

  const Graph& graph() const { return graph_; }
  std::size_t phys_dim() const { return phys_dim_; }
  const Matrix& edge_term(std::size_t e) const { return edge_terms_.at(e); }
  const Matrix& vertex_term(std::size_t v) const { return vertex_terms_.at(v); }
  const std::vector<Matrix>& edge_terms() const { return edge_terms_; }
  const std::vector<Matrix>& vertex_terms() const { return vertex_terms_; }

 private:
  Graph graph_;
  std::vector<Matrix> edge_terms_;
  std::vector<Matrix> vertex_terms_;
  std::size_t phys_dim_ = 2;
};

/// Edge terms jzz Z Z, vertex terms hx X + hz Z (parameters taken literally, no extra sign).
Hamiltonian mixed_field_ising(const Graph& g, double jzz, double hx, double hz);

/// H = -sum_edges Z Z - hx sum_vertices X.
Hamiltonian transverse_field_ising(const Graph& g, double hx);

/// An operator on a vertex and its neighbors; tensor factor order follows `support`.
struct StarTerm {
  std::vector<std::size_t> support;  // center first, then neighbors ascending
  Matrix op;
};

/// Per-vertex terms -X_a + exp(-beta J Z_a sum_b Z_b) whose common zero-energy ground state
/// is the Ising square-root state. Only used for verification; these are (r+1)-body.
std::vector<StarTerm> sqrt_parent_hamiltonian(const Graph& g, double beta, double j);

/// {"model": "mixed_field_ising" | "tfim", "params": {...}, "graph": {...}}
Hamiltonian hamiltonian_from_json(const nlohmann::json& j);
nlohmann::json model_json(const std::string& model, const nlohmann::json& params, const Graph& g);

}  // namespace bptn
