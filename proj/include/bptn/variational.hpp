#pragma once

#include <cstdint>
#include <vector>

#include "bptn/bp.hpp"
#include "bptn/hamiltonian.hpp"
#include "bptn/states.hpp"

namespace bptn {

struct VarInit {
  enum class Kind { Product, SqrtState, Random };
  Kind kind = Kind::Product;
  Vector local;        // Product: the single-site vector; empty means (1, 1) / sqrt(2)
  double beta = 0.0;   // SqrtState
  double j = 1.0;      // SqrtState
  std::uint64_t seed = 0;  // Random
};

struct VarConfig {
  int t_var = 40;  // outer iterations
  int t_bp = 5;    // BP steps per outer iteration
  int n_gd = 10;   // gradient steps per outer iteration
  double gamma = 0.01;
  std::size_t chi = 2;
  VarInit init;
  double noise = 1e-2;  // Gaussian amplitude added to every initial tensor entry; 0 disables
  std::uint64_t noise_seed = 1;
  bool check_descent = true;  // abort if the frozen-message energy rises within an inner loop
  BpConfig final_bp;          // warm-started convergence run on the final state
  std::size_t threads = 1;

  void validate() const;
};

struct VarIteration {
  double energy = 0.0;  // frozen-message energy after the gradient steps
  double mean_abs_z = 0.0;
  double mean_x = 0.0;
  double mean_zz = 0.0;
};

struct VarTrace {
  std::vector<VarIteration> iterations;
  TensorNetworkState state;
  MessageSet messages;  // after the final convergence run
  double final_energy = 0.0;
  SiteAverages final_observables;
  bool final_bp_converged = false;
  /// Last three recorded energies agree within 1e-6.
  bool energy_converged = false;
};

/// Sum of normalized local terms: edge terms on 2-site RDMs plus vertex terms on 1-site RDMs.
double energy(const TensorNetworkState& s, const MessageSet& msgs, const Hamiltonian& h);

/// dE/d conj(psi_i) for every site with the messages held fixed. Each term contributes
/// (d Tr(rho h) - E_t d Tr(rho)) / Tr(rho) on its sites.
std::vector<DenseTensor> energy_gradient(const TensorNetworkState& s, const MessageSet& msgs,
                                         const Hamiltonian& h, std::size_t threads = 1);

/// Same, also returning the energy it was evaluated at.
std::vector<DenseTensor> energy_gradient(const TensorNetworkState& s, const MessageSet& msgs,
                                         const Hamiltonian& h, double& energy_out, std::size_t threads = 1);

/// The starting state for `cfg`: constructor, padded to chi, then noise.
TensorNetworkState initial_state(const Graph& g, const VarConfig& cfg);

/// Alternates t_bp warm-started BP steps with n_gd frozen-message gradient steps, t_var times.
VarTrace variational_prepare(const Graph& g, const Hamiltonian& h, const VarConfig& cfg);

struct SweepPoint {
  double hx = 0.0;
  int restart = 0;
  VarTrace trace;
};

/// Transverse-field Ising runs for every (hx, restart); restart r uses noise seed
/// derive_seed(cfg.noise_seed, r). Output is ordered by hx, then restart.
std::vector<SweepPoint> tfim_sweep(const Graph& g, const std::vector<double>& hx_values, const VarConfig& cfg,
                                   int restarts, std::size_t threads = 1);

struct SweepSummary {
  double hx = 0.0;
  double mean_abs_z = 0.0;  // averaged over restarts
  double abs_z_spread = 0.0;  // max - min over restarts
  double mean_x = 0.0;
  double mean_zz = 0.0;
  double energy_density = 0.0;  // lowest final energy over restarts, divided by N
};

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepPoint>& points, std::size_t num_sites);

}  // namespace bptn
