#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bptn/graph.hpp"
#include "bptn/tensor.hpp"

namespace bptn {

/// A tensor network state on a graph: one tensor of shape (d, chi_leg0, ..., chi_leg{r-1})
/// per vertex, with virtual legs ordered like the vertex's neighbor list.
///
/// Tensors are kept unnormalized; observables are always computed as normalized ratios.
class TensorNetworkState {
 public:
  TensorNetworkState() = default;
  /// Validates ranks, shared-bond extents, a common physical dimension and non-zero tensors.
  TensorNetworkState(Graph graph, std::vector<DenseTensor> site_tensors);

  const Graph& graph() const { return graph_; }
  std::size_t num_sites() const { return graph_.num_vertices(); }
  std::size_t phys_dim() const { return phys_dim_; }
  const DenseTensor& site(std::size_t v) const { return tensors_.at(v); }
  const std::vector<DenseTensor>& site_tensors() const { return tensors_; }
  /// Bond dimension of an undirected edge (by edge id).
  std::size_t bond_dim(std::size_t edge) const;
  std::size_t max_bond_dim() const;

  /// Same graph, replaced tensors (validated again).
  TensorNetworkState with_site_tensors(std::vector<DenseTensor> tensors) const;

 private:
  Graph graph_;
  std::vector<DenseTensor> tensors_;
  std::size_t phys_dim_ = 0;
};

/// Amplitudes proportional to the product over edges of m(s_a, s_b); bond dimension d.
TensorNetworkState generalized_graph_state(const Graph& g, const Matrix& m);
/// Same, with an explicitly supplied factor A (A A^T = M) instead of the canonical one.
TensorNetworkState generalized_graph_state_from_factor(const Graph& g, const Matrix& a);

/// The 2x2 edge matrix with exp(+beta J / 2) on the diagonal and exp(-beta J / 2) off it.
Matrix ising_sqrt_matrix(double beta, double j);
/// Amplitudes exp((beta J / 2) * sum_edges s_a s_b) with s = +1 for |0> and -1 for |1>.
TensorNetworkState square_root_state(const Graph& g, double beta, double j);
/// CZ on every edge applied to |+>^N.
TensorNetworkState graph_state(const Graph& g);
/// chi = 1 product of the same local vector on every site.
TensorNetworkState product_state(const Graph& g, const Vector& local);
/// Complex Gaussian entries, each site tensor scaled to unit Frobenius norm.
TensorNetworkState random_state(const Graph& g, std::size_t chi, std::uint64_t seed,
                                std::size_t phys_dim = 2);

/// Grows every bond to `chi` by zero padding; existing entries are kept in place.
TensorNetworkState pad_bonds(const TensorNetworkState& s, std::size_t chi);
/// Adds `amplitude` times complex Gaussian noise (re and im independent N(0,1)) to every entry.
TensorNetworkState perturb(const TensorNetworkState& s, double amplitude, std::uint64_t seed);

/// Full contraction to a unit-norm vector of d^N amplitudes. Site 0 is the most
/// significant digit of the basis index. Requires N <= 16.
Vector to_statevector(const TensorNetworkState& s);

nlohmann::json to_json(const TensorNetworkState& s);
TensorNetworkState state_from_json(const nlohmann::json& j);

}  // namespace bptn
