#pragma once

#include <cstdint>
#include <vector>

#include "bptn/hamiltonian.hpp"
#include "bptn/states.hpp"

namespace bptn {

// Statevector helpers. Basis index digits run from site 0 (most significant) to site N-1.

/// out += op acting on `sites` (tensor factor order as listed) applied to psi.
void apply_local(const Matrix& op, const std::vector<std::size_t>& sites, std::size_t n, std::size_t d,
                 const Vector& psi, Vector& out);
Vector apply_hamiltonian(const Hamiltonian& h, const Vector& psi);
Matrix dense_hamiltonian(const Hamiltonian& h);
/// <psi|H|psi> / <psi|psi>
double energy_expectation(const Hamiltonian& h, const Vector& psi);
Vector apply_star_terms(const std::vector<StarTerm>& terms, std::size_t n, const Vector& psi);

struct EdResult {
  double e0 = 0.0;
  double e1 = 0.0;
  Vector v0;
  Vector v1;
};

/// Lowest two eigenpairs. Dense eigendecomposition up to N = 10, restarted Lanczos with
/// deflation for N = 11..14. Every pair is checked to ||Hv - Ev|| <= 1e-9.
EdResult exact_diagonalize(const Hamiltonian& h);

/// |<v|psi>|^2 with both vectors normalized.
double fidelity(const TensorNetworkState& s, const Vector& v);
double fidelity(const Vector& psi, const Vector& v);
/// |<v0|psi>|^2 + |<v1|psi>|^2
double ground_space_overlap(const TensorNetworkState& s, const EdResult& ed);
double ground_space_overlap(const Vector& psi, const EdResult& ed);

struct McConfig {
  std::uint64_t sweeps = 21000;  // total, including burn-in
  std::uint64_t burn_in = 1000;
  std::size_t batches = 50;
  std::uint64_t seed = 1;
  bool cold_start = true;  // all spins +1; otherwise uniformly random

  void validate() const;
};

struct McResult {
  std::vector<double> magnetization;     // <s_a>
  std::vector<double> magnetization_se;  // batch-means standard error
  double mean_abs_magnetization = 0.0;   // mean over sites of |<s_a>|
  double mean_abs_magnetization_se = 0.0;
  std::vector<double> edge_correlation;  // <s_a s_b> by edge id
  std::vector<double> edge_correlation_se;
  std::uint64_t samples = 0;
  McConfig config;
};

/// Single-spin-flip Metropolis for P(s) proportional to exp(beta J sum_edges s_a s_b).
/// One sweep is N proposals at uniformly random sites; one sample per sweep after burn-in.
McResult classical_ising_mc(const Graph& g, double beta, double j, const McConfig& cfg);

struct ClassicalExact {
  std::vector<double> z;   // Gibbs average of s_a
  std::vector<double> x;   // <X_a> in the square-root state
  std::vector<double> zz;  // by edge id
};

/// Exhaustive enumeration over 2^N configurations (N <= 16).
ClassicalExact classical_exact_expectations(const Graph& g, double beta, double j);

}  // namespace bptn
