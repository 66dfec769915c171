#include "bptn/bp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "bptn/error.hpp"
#include "bptn/parallel.hpp"
#include "bptn/pauli.hpp"
#include "bptn/random.hpp"

namespace bptn {

bool operator==(const MessageSet& a, const MessageSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) return false;
    if (a[i] != b[i]) return false;
  }
  return true;
}

void BpConfig::validate() const {
  if (max_steps < 1) throw InvalidInput("BP max_steps must be >= 1");
  if (!(rdm_tolerance > 0.0)) throw InvalidInput("BP rdm_tolerance must be positive");
  if (!(damping >= 0.0 && damping < 1.0)) throw InvalidInput("BP damping must lie in [0, 1)");
}

void check_site_set(const Graph& g, const std::vector<std::size_t>& sites) {
  if (sites.empty() || sites.size() > 3) throw InvalidInput("RDM site set must contain 1 to 3 sites");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] >= g.num_vertices()) throw InvalidInput("RDM site out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (sites[i] == sites[j]) throw InvalidInput("RDM sites must be distinct");
    }
  }
  // Grow a connected component from sites[0] inside the set.
  std::vector<bool> reached(sites.size(), false);
  reached[0] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (reached[i]) continue;
      for (std::size_t j = 0; j < sites.size(); ++j) {
        if (reached[j] && g.has_edge(sites[i], sites[j])) {
          reached[i] = grew = true;
          break;
        }
      }
    }
  }
  if (!std::all_of(reached.begin(), reached.end(), [](bool b) { return b; })) {
    throw InvalidInput("RDM sites must induce a connected subgraph");
  }
}

// ---------------------------------------------------------------------------

LocalNetwork::LocalNetwork(const TensorNetworkState& s, const MessageSet& msgs)
    : s_(s), msgs_(msgs), n_(s.num_sites()) {
  if (msgs.size() != s.graph().num_directed_edges()) {
    throw InvalidInput("message set does not match the state's graph");
  }
}

LabeledTensor LocalNetwork::absorbed_ket(std::size_t v, const std::vector<std::size_t>& open) const {
  const Graph& g = s_.graph();
  const auto nbrs = g.neighbors(v);
  LabeledTensor acc{s_.site(v), {phys_ket(v)}};
  for (auto w : nbrs) acc.labels.push_back(bond_ket(g.edge_id(v, w)));
  for (std::size_t l = 0; l < nbrs.size(); ++l) {
    if (std::find(open.begin(), open.end(), nbrs[l]) != open.end()) continue;
    const std::size_t e = g.edge_id(v, nbrs[l]);
    const Matrix& m = msgs_[g.incoming(v, l)];
    if (static_cast<std::size_t>(m.rows()) != s_.site(v).extent(1 + l)) {
      throw InvalidInput("message dimension does not match bond dimension");
    }
    acc = contract(acc, LabeledTensor{DenseTensor::from_matrix(m), {bond_ket(e), bond_bra(e)}});
  }
  return acc;
}

LabeledTensor LocalNetwork::bra(std::size_t v, bool trace_phys) const {
  const Graph& g = s_.graph();
  LabeledTensor t{s_.site(v).conj(), {trace_phys ? phys_ket(v) : phys_bra(v)}};
  for (auto w : g.neighbors(v)) t.labels.push_back(bond_bra(g.edge_id(v, w)));
  return t;
}

LabeledTensor LocalNetwork::block(std::size_t v, const std::vector<std::size_t>& open) const {
  return contract(absorbed_ket(v, open), bra(v));
}

namespace {

std::vector<std::size_t> open_neighbors(const Graph& g, std::size_t v, const std::vector<std::size_t>& sites) {
  std::vector<std::size_t> open;
  for (auto w : sites) {
    if (w != v && g.has_edge(v, w)) open.push_back(w);
  }
  return open;
}

// Orders the other sites so that each is adjacent to one already placed, starting from `first`.
std::vector<std::size_t> connected_order(const Graph& g, std::size_t first, const std::vector<std::size_t>& sites) {
  std::vector<std::size_t> placed{first};
  std::vector<std::size_t> rest;
  for (auto v : sites) {
    if (v != first) rest.push_back(v);
  }
  while (!rest.empty()) {
    auto it = std::find_if(rest.begin(), rest.end(), [&](std::size_t v) {
      return std::any_of(placed.begin(), placed.end(), [&](std::size_t p) { return g.has_edge(p, v); });
    });
    if (it == rest.end()) it = rest.begin();
    placed.push_back(*it);
    rest.erase(it);
  }
  return placed;
}

}  // namespace

LabeledTensor LocalNetwork::operator_tensor(const Matrix& op, const std::vector<std::size_t>& sites) const {
  const std::size_t d = s_.phys_dim();
  std::size_t dim = 1;
  for (std::size_t i = 0; i < sites.size(); ++i) dim *= d;
  if (static_cast<std::size_t>(op.rows()) != dim || static_cast<std::size_t>(op.cols()) != dim) {
    throw InvalidInput("operator dimension does not match the site set");
  }
  std::vector<std::size_t> shape(2 * sites.size(), d);
  LabeledTensor t{DenseTensor::from_matrix(op).reshaped(shape), {}};
  for (auto v : sites) t.labels.push_back(phys_bra(v));
  for (auto v : sites) t.labels.push_back(phys_ket(v));
  return t;
}

Matrix LocalNetwork::raw_rdm(const std::vector<std::size_t>& sites) const {
  const Graph& g = s_.graph();
  check_site_set(g, sites);
  const auto order = connected_order(g, sites.front(), sites);
  std::vector<LabeledTensor> parts;
  for (auto v : order) parts.push_back(block(v, open_neighbors(g, v, sites)));
  const LabeledTensor full = contract_sequence(parts);
  std::vector<int> labels;
  for (auto v : sites) labels.push_back(phys_ket(v));
  for (auto v : sites) labels.push_back(phys_bra(v));
  return arrange(full, labels).as_matrix(sites.size());
}

DenseTensor LocalNetwork::raw_gradient(const std::vector<std::size_t>& sites, std::size_t i,
                                       const Matrix& op) const {
  const Graph& g = s_.graph();
  const auto order = connected_order(g, i, sites);
  std::vector<LabeledTensor> parts{absorbed_ket(i, open_neighbors(g, i, sites))};
  for (std::size_t k = 1; k < order.size(); ++k) parts.push_back(block(order[k], open_neighbors(g, order[k], sites)));
  parts.push_back(operator_tensor(op, sites));
  const LabeledTensor full = contract_sequence(parts);
  std::vector<int> labels{phys_bra(i)};
  for (auto w : g.neighbors(i)) labels.push_back(bond_bra(g.edge_id(i, w)));
  return arrange(full, labels);
}

// ---------------------------------------------------------------------------

MessageSet init_messages(const TensorNetworkState& s, const MessageInit& init) {
  const Graph& g = s.graph();
  std::vector<Matrix> out(g.num_directed_edges());
  Rng rng(init.seed);
  for (std::size_t id = 0; id < out.size(); ++id) {
    const auto chi = static_cast<Eigen::Index>(s.bond_dim(g.undirected(id)));
    if (init.kind == MessageInit::Kind::Identity) {
      out[id] = Matrix::Identity(chi, chi) / static_cast<double>(chi);
    } else {
      Matrix gm(chi, chi);
      for (Eigen::Index r = 0; r < chi; ++r)
        for (Eigen::Index c = 0; c < chi; ++c) {
          const double re = rng.normal();
          const double im = rng.normal();
          gm(r, c) = cplx{re, im};
        }
      Matrix m = hermitize(gm.adjoint() * gm);
      out[id] = m / m.trace().real();
    }
  }
  return MessageSet(std::move(out));
}

MessageSet bp_step(const TensorNetworkState& s, const MessageSet& msgs, double damping, std::size_t threads) {
  if (!(damping >= 0.0 && damping < 1.0)) throw InvalidInput("BP damping must lie in [0, 1)");
  const Graph& g = s.graph();
  const LocalNetwork net(s, msgs);
  std::vector<Matrix> out(g.num_directed_edges());
  parallel_for(out.size(), threads, [&](std::size_t id) {
    const auto [i, j] = g.directed_edge(id);
    const std::size_t e = g.undirected(id);
    const LabeledTensor raw = contract(net.absorbed_ket(i, {j}), net.bra(i, true));
    const int order[2] = {net.bond_ket(e), net.bond_bra(e)};
    Matrix m = hermitize(arrange(raw, order).as_matrix(1));
    const double tr = m.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
      throw NumericalFailure("BP message " + std::to_string(i) + "->" + std::to_string(j) + " has zero trace");
    }
    m /= tr;
    if (damping > 0.0) m = (1.0 - damping) * m + damping * msgs[id];
    out[id] = std::move(m);
  });
  return MessageSet(std::move(out));
}

std::vector<Rdm> edge_rdms(const TensorNetworkState& s, const MessageSet& msgs) {
  const Graph& g = s.graph();
  std::vector<Rdm> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) out.push_back(rdm(s, msgs, {e.a, e.b}));
  return out;
}

BpResult run_bp(const TensorNetworkState& s, const BpConfig& cfg) {
  return run_bp(s, cfg, init_messages(s, cfg.init));
}

BpResult run_bp(const TensorNetworkState& s, const BpConfig& cfg, const MessageSet& start) {
  cfg.validate();
  BpResult result{start, {}};
  std::vector<Rdm> previous = edge_rdms(s, result.messages);
  for (int step = 1; step <= cfg.max_steps; ++step) {
    MessageSet next = bp_step(s, result.messages, cfg.damping, cfg.threads);
    BpStepRecord rec;
    for (std::size_t id = 0; id < next.size(); ++id) {
      rec.max_message_delta = std::max(rec.max_message_delta, (next[id] - result.messages[id]).norm());
    }
    std::vector<Rdm> current = edge_rdms(s, next);
    for (std::size_t e = 0; e < current.size(); ++e) {
      rec.max_rdm_trace_distance = std::max(rec.max_rdm_trace_distance, rdm_trace_distance(previous[e], current[e]));
    }
    result.messages = std::move(next);
    previous = std::move(current);
    result.diagnostics.series.push_back(rec);
    result.diagnostics.steps_run = step;
    if (rec.max_rdm_trace_distance <= cfg.rdm_tolerance) {
      result.diagnostics.converged = true;
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

Rdm rdm(const TensorNetworkState& s, const MessageSet& msgs, const std::vector<std::size_t>& sites) {
  const LocalNetwork net(s, msgs);
  Matrix raw = hermitize(net.raw_rdm(sites));
  const double tr = raw.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) throw NumericalFailure("RDM has zero trace");
  return {sites, raw / tr};
}

double expectation(const Rdm& rho, const Matrix& op) {
  if (op.rows() != rho.matrix.rows() || op.cols() != rho.matrix.cols()) {
    throw InvalidInput("expectation: operator dimension does not match the RDM");
  }
  const cplx value = (rho.matrix * op).trace();
  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  if (std::abs(value.imag()) > 1e-8 * scale) {
    throw NumericalFailure("expectation: imaginary part " + std::to_string(value.imag()) + " exceeds 1e-8");
  }
  return value.real();
}

double entanglement_entropy(const Rdm& rho) {
  const auto eig = hermitian_eig(hermitize(rho.matrix));
  Eigen::VectorXd lambda = eig.values;
  const double most_negative = lambda.minCoeff();
  if (most_negative < -1e-6) {
    warn("RDM eigenvalue " + std::to_string(most_negative) + " clamped to zero before entropy");
  }
  lambda = lambda.cwiseMax(0.0);
  const double total = lambda.sum();
  if (!(total > 0.0)) throw NumericalFailure("entanglement_entropy: RDM has no positive spectrum");
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double p = lambda(i) / total;
    if (p > 1e-12) s -= p * std::log(p);
  }
  return s;
}

double rdm_trace_distance(const Rdm& a, const Rdm& b) {
  if (a.matrix.rows() != b.matrix.rows() || a.sites != b.sites) {
    throw InvalidInput("rdm_trace_distance: RDMs live on different sites");
  }
  const auto eig = hermitian_eig(hermitize(a.matrix - b.matrix));
  return 0.5 * eig.values.cwiseAbs().sum();
}

SiteAverages site_averaged_observables(const TensorNetworkState& s, const MessageSet& msgs) {
  if (s.phys_dim() != 2) throw InvalidInput("site_averaged_observables requires qubits (d = 2)");
  const Graph& g = s.graph();
  SiteAverages avg;
  const auto n = static_cast<double>(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const Rdm r = rdm(s, msgs, {v});
    const double z = expectation(r, pauli::Z());
    avg.mean_z += z / n;
    avg.mean_abs_z += std::abs(z) / n;
    avg.mean_x += expectation(r, pauli::X()) / n;
    avg.mean_y += expectation(r, pauli::Y()) / n;
  }
  if (g.num_edges() > 0) {
    const auto m = static_cast<double>(g.num_edges());
    const Matrix zz = kron(pauli::Z(), pauli::Z());
    for (const auto& r : edge_rdms(s, msgs)) {
      avg.edge_entropy += entanglement_entropy(r) / m;
      avg.mean_zz += expectation(r, zz) / m;
    }
  }
  return avg;
}

std::string diagnostics_csv(const BpDiagnostics& d) {
  std::ostringstream os;
  os << "step,max_rdm_trace_distance,max_message_delta\n" << std::setprecision(12);
  for (std::size_t i = 0; i < d.series.size(); ++i) {
    os << (i + 1) << ',' << d.series[i].max_rdm_trace_distance << ',' << d.series[i].max_message_delta << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const MessageSet& m, const Graph& g) {
  if (m.size() != g.num_directed_edges()) throw InvalidInput("message set does not match graph");
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t id = 0; id < m.size(); ++id) {
    const auto e = g.directed_edge(id);
    list.push_back({{"from", e.from}, {"to", e.to}, {"message", to_json(DenseTensor::from_matrix(m[id]))}});
  }
  return {{"messages", list}};
}

MessageSet messages_from_json(const nlohmann::json& j, const Graph& g) {
  try {
    std::vector<Matrix> out(g.num_directed_edges());
    std::vector<bool> seen(out.size(), false);
    for (const auto& item : j.at("messages")) {
      const auto id = g.directed_edge_id(item.at("from").get<std::size_t>(), item.at("to").get<std::size_t>());
      const DenseTensor t = tensor_from_json(item.at("message"));
      if (t.rank() != 2) throw InvalidInput("message JSON: messages must be matrices");
      out[id] = t.as_matrix(1);
      seen[id] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
      throw InvalidInput("message JSON: missing directed edges");
    }
    return MessageSet(std::move(out));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("message JSON: ") + e.what());
  }
}

}  // namespace bptn
