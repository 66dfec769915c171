#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bptn/states.hpp"
#include "bptn/tensor.hpp"

namespace bptn {

/// One chi x chi matrix per directed edge, indexed by Graph::directed_edge_id.
/// Row index = ket bond index, column index = bra bond index.
class MessageSet {
 public:
  MessageSet() = default;
  explicit MessageSet(std::vector<Matrix> messages) : messages_(std::move(messages)) {}

  std::size_t size() const { return messages_.size(); }
  const Matrix& operator[](std::size_t directed_edge) const { return messages_[directed_edge]; }
  Matrix& operator[](std::size_t directed_edge) { return messages_[directed_edge]; }
  const std::vector<Matrix>& all() const { return messages_; }

  friend bool operator==(const MessageSet& a, const MessageSet& b);

 private:
  std::vector<Matrix> messages_;
};

struct MessageInit {
  enum class Kind { Identity, Random };
  Kind kind = Kind::Identity;
  std::uint64_t seed = 0;

  static MessageInit identity() { return {}; }
  static MessageInit random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

struct BpConfig {
  int max_steps = 100;
  double rdm_tolerance = 1e-8;  // max over edges of the 2-site RDM trace distance between steps
  double damping = 0.0;         // new = (1 - damping) * update + damping * old
  MessageInit init;
  std::size_t threads = 1;

  void validate() const;
};

struct BpStepRecord {
  double max_rdm_trace_distance = 0.0;
  double max_message_delta = 0.0;  // Frobenius norm
};

struct BpDiagnostics {
  int steps_run = 0;
  bool converged = false;
  std::vector<BpStepRecord> series;  // one entry per step
};

struct BpResult {
  MessageSet messages;
  BpDiagnostics diagnostics;
};

/// Identity strategy: I / chi. Random: G^dagger G / Tr(G^dagger G) with seeded Gaussian G.
MessageSet init_messages(const TensorNetworkState& s, const MessageInit& init);

/// One synchronous update of every directed edge from the input set: contract psi_i,
/// conj(psi_i) and the incoming messages m_{k->i}, k != j; hermitize; normalize to unit
/// trace; then mix with the old message by `damping`.
MessageSet bp_step(const TensorNetworkState& s, const MessageSet& msgs, double damping,
                   std::size_t threads = 1);

/// Iterates bp_step until the 2-site RDMs stop moving (in trace distance) or max_steps.
BpResult run_bp(const TensorNetworkState& s, const BpConfig& cfg);
BpResult run_bp(const TensorNetworkState& s, const BpConfig& cfg, const MessageSet& start);

/// Reduced density matrix on 1-3 connected sites; tensor factor order follows `sites`.
struct Rdm {
  std::vector<std::size_t> sites;
  Matrix matrix;
};

Rdm rdm(const TensorNetworkState& s, const MessageSet& msgs, const std::vector<std::size_t>& sites);

/// Re Tr(rho op); throws NumericalFailure if the imaginary part exceeds 1e-8.
double expectation(const Rdm& rho, const Matrix& op);

/// Von Neumann entropy (natural log). Negative eigenvalues are clamped to zero and the
/// spectrum renormalized first; a clamp larger than 1e-6 emits a warning.
double entanglement_entropy(const Rdm& rho);

/// Half the trace norm of the difference.
double rdm_trace_distance(const Rdm& a, const Rdm& b);

struct SiteAverages {
  double mean_abs_z = 0.0;
  double mean_z = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double edge_entropy = 0.0;
  double mean_zz = 0.0;
};

/// Qubit-only (d = 2) site and edge averages of the BP observables.
SiteAverages site_averaged_observables(const TensorNetworkState& s, const MessageSet& msgs);

/// Two-site RDMs of every edge (ordered a < b), indexed by edge id.
std::vector<Rdm> edge_rdms(const TensorNetworkState& s, const MessageSet& msgs);

std::string diagnostics_csv(const BpDiagnostics& d);

nlohmann::json to_json(const MessageSet& m, const Graph& g);
MessageSet messages_from_json(const nlohmann::json& j, const Graph& g);

// ---------------------------------------------------------------------------
// Local doubled-network pieces shared by the RDM, energy and gradient code.

/// Labels: physical ket/bra of vertex v are 2v and 2v+1; ket/bra bond of edge e are
/// 2N + 2e and 2N + 2e + 1.
class LocalNetwork {
 public:
  LocalNetwork(const TensorNetworkState& s, const MessageSet& msgs);

  int phys_ket(std::size_t v) const { return static_cast<int>(2 * v); }
  int phys_bra(std::size_t v) const { return static_cast<int>(2 * v + 1); }
  int bond_ket(std::size_t e) const { return static_cast<int>(2 * n_ + 2 * e); }
  int bond_bra(std::size_t e) const { return static_cast<int>(2 * n_ + 2 * e + 1); }

  /// psi_v with the incoming message of every neighbor not in `open` absorbed on its ket leg.
  /// Free labels: phys ket, ket bonds to `open`, bra bonds to the absorbed neighbors.
  LabeledTensor absorbed_ket(std::size_t v, const std::vector<std::size_t>& open) const;
  /// conj(psi_v) with all bra labels; `trace_phys` relabels its physical leg as the ket one.
  LabeledTensor bra(std::size_t v, bool trace_phys = false) const;
  /// absorbed_ket(v, open) contracted with bra(v): free labels are phys ket/bra and the
  /// ket/bra bonds to `open`.
  LabeledTensor block(std::size_t v, const std::vector<std::size_t>& open) const;

  /// Unnormalized RDM (ket rows, bra columns) on a connected site set.
  Matrix raw_rdm(const std::vector<std::size_t>& sites) const;

  /// d(Tr(rho_raw op)) / d conj(psi_i) on the site set, shaped like psi_i.
  DenseTensor raw_gradient(const std::vector<std::size_t>& sites, std::size_t i, const Matrix& op) const;

  /// Operator as a tensor with labels [bra phys of sites..., ket phys of sites...].
  LabeledTensor operator_tensor(const Matrix& op, const std::vector<std::size_t>& sites) const;

 private:
  const TensorNetworkState& s_;
  const MessageSet& msgs_;
  std::size_t n_;
};

/// Throws InvalidInput unless `sites` are 1-3 distinct vertices inducing a connected subgraph.
void check_site_set(const Graph& g, const std::vector<std::size_t>& sites);

}  // namespace bptn
