#include "bptn/states.hpp"

#include <algorithm>
#include <cmath>

#include "bptn/error.hpp"
#include "bptn/random.hpp"

namespace bptn {

TensorNetworkState::TensorNetworkState(Graph graph, std::vector<DenseTensor> site_tensors)
    : graph_(std::move(graph)), tensors_(std::move(site_tensors)) {
  const std::size_t n = graph_.num_vertices();
  if (tensors_.size() != n) throw InvalidInput("state needs exactly one tensor per vertex");
  for (std::size_t v = 0; v < n; ++v) {
    const auto& t = tensors_[v];
    if (t.rank() != graph_.degree(v) + 1) {
      throw InvalidInput("site tensor " + std::to_string(v) + " has rank " + std::to_string(t.rank()) +
                         ", expected degree + 1 = " + std::to_string(graph_.degree(v) + 1));
    }
    if (v == 0) phys_dim_ = t.extent(0);
    if (t.extent(0) != phys_dim_) throw InvalidInput("site tensors disagree on the physical dimension");
    if (!t.all_finite()) throw InvalidInput("site tensor " + std::to_string(v) + " has non-finite entries");
    if (t.is_zero()) throw InvalidInput("site tensor " + std::to_string(v) + " is identically zero");
  }
  for (const auto& e : graph_.edges()) {
    const auto xa = tensors_[e.a].extent(1 + graph_.leg(e.a, e.b));
    const auto xb = tensors_[e.b].extent(1 + graph_.leg(e.b, e.a));
    if (xa != xb) {
      throw InvalidInput("bond extents differ across edge (" + std::to_string(e.a) + "," +
                         std::to_string(e.b) + ")");
    }
  }
}

std::size_t TensorNetworkState::bond_dim(std::size_t edge) const {
  const auto& e = graph_.edges().at(edge);
  return tensors_[e.a].extent(1 + graph_.leg(e.a, e.b));
}

std::size_t TensorNetworkState::max_bond_dim() const {
  std::size_t m = 1;
  for (std::size_t e = 0; e < graph_.num_edges(); ++e) m = std::max(m, bond_dim(e));
  return m;
}

TensorNetworkState TensorNetworkState::with_site_tensors(std::vector<DenseTensor> tensors) const {
  return TensorNetworkState(graph_, std::move(tensors));
}

// ---------------------------------------------------------------------------

TensorNetworkState generalized_graph_state_from_factor(const Graph& g, const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidInput("edge factor must be square");
  const auto d = static_cast<std::size_t>(a.rows());
  std::vector<DenseTensor> tensors;
  tensors.reserve(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const std::size_t r = g.degree(v);
    std::vector<std::size_t> shape(r + 1, d);
    DenseTensor t(shape);
    // Identity tensor delta(s, alpha_1, ..., alpha_r) with A applied on every virtual leg:
    // T[s, alpha...] = prod_k A(s, alpha_k).
    std::vector<std::size_t> idx(r + 1, 0);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      std::size_t rem = flat;
      for (std::size_t ax = r + 1; ax-- > 0;) {
        idx[ax] = rem % d;
        rem /= d;
      }
      cplx amp{1.0, 0.0};
      for (std::size_t k = 1; k <= r; ++k) amp *= a(idx[0], idx[k]);
      t[flat] = amp;
    }
    tensors.push_back(std::move(t));
  }
  return TensorNetworkState(g, std::move(tensors));
}

TensorNetworkState generalized_graph_state(const Graph& g, const Matrix& m) {
  return generalized_graph_state_from_factor(g, symmetric_factor(m));
}

Matrix ising_sqrt_matrix(double beta, double j) {
  const double k = 0.5 * beta * j;
  Matrix m(2, 2);
  m << std::exp(k), std::exp(-k), std::exp(-k), std::exp(k);
  return m;
}

TensorNetworkState square_root_state(const Graph& g, double beta, double j) {
  return generalized_graph_state(g, ising_sqrt_matrix(beta, j));
}

TensorNetworkState graph_state(const Graph& g) {
  Matrix m(2, 2);
  m << 1.0, 1.0, 1.0, -1.0;
  return generalized_graph_state(g, m);
}

TensorNetworkState product_state(const Graph& g, const Vector& local) {
  if (local.size() == 0 || local.norm() == 0.0) throw InvalidInput("product_state: local vector is zero");
  const auto d = static_cast<std::size_t>(local.size());
  std::vector<DenseTensor> tensors;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<std::size_t> shape(g.degree(v) + 1, 1);
    shape[0] = d;
    DenseTensor t(shape);
    for (std::size_t s = 0; s < d; ++s) t[s] = local(static_cast<Eigen::Index>(s));
    tensors.push_back(std::move(t));
  }
  return TensorNetworkState(g, std::move(tensors));
}

TensorNetworkState random_state(const Graph& g, std::size_t chi, std::uint64_t seed, std::size_t phys_dim) {
  if (chi == 0) throw InvalidInput("random_state: chi must be positive");
  if (phys_dim == 0) throw InvalidInput("random_state: physical dimension must be positive");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(2.0);
  std::vector<DenseTensor> tensors;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<std::size_t> shape(g.degree(v) + 1, chi);
    shape[0] = phys_dim;
    DenseTensor t(shape);
    for (auto& z : t.data()) {
      const double re = rng.normal();
      const double im = rng.normal();
      z = scale * cplx{re, im};
    }
    t *= 1.0 / t.norm();
    tensors.push_back(std::move(t));
  }
  return TensorNetworkState(g, std::move(tensors));
}

TensorNetworkState pad_bonds(const TensorNetworkState& s, std::size_t chi) {
  const Graph& g = s.graph();
  std::vector<DenseTensor> tensors;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const auto& old = s.site(v);
    std::vector<std::size_t> shape = old.shape();
    for (std::size_t k = 1; k < shape.size(); ++k) {
      if (shape[k] > chi) throw InvalidInput("pad_bonds: bond already larger than target");
      shape[k] = chi;
    }
    DenseTensor t(shape);
    const auto old_strides = old.strides();
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t flat = 0; flat < old.size(); ++flat) {
      std::size_t rem = flat;
      for (std::size_t ax = 0; ax < shape.size(); ++ax) {
        idx[ax] = rem / old_strides[ax];
        rem %= old_strides[ax];
      }
      t[t.flat_index(idx)] = old[flat];
    }
    tensors.push_back(std::move(t));
  }
  return TensorNetworkState(g, std::move(tensors));
}

TensorNetworkState perturb(const TensorNetworkState& s, double amplitude, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DenseTensor> tensors = s.site_tensors();
  for (auto& t : tensors) {
    for (auto& z : t.data()) {
      const double re = rng.normal();
      const double im = rng.normal();
      z += amplitude * cplx{re, im};
    }
  }
  return s.with_site_tensors(std::move(tensors));
}

Vector to_statevector(const TensorNetworkState& s) {
  const Graph& g = s.graph();
  const std::size_t n = g.num_vertices();
  if (n > 16) throw InvalidInput("to_statevector: N must be <= 16");

  const auto n_int = static_cast<int>(n);
  auto site_labels = [&](std::size_t v) {
    std::vector<int> labels{static_cast<int>(v)};
    for (auto w : g.neighbors(v)) labels.push_back(n_int + static_cast<int>(g.edge_id(v, w)));
    return labels;
  };

  // Absorb vertices greedily, preferring those with the most already-absorbed neighbors
  // to keep the open bond frontier small.
  std::vector<bool> absorbed(n, false);
  std::vector<std::size_t> absorbed_neighbors(n, 0);
  LabeledTensor acc{s.site(0), site_labels(0)};
  absorbed[0] = true;
  for (auto w : g.neighbors(0)) ++absorbed_neighbors[w];
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (absorbed[v]) continue;
      if (next == n || absorbed_neighbors[v] > absorbed_neighbors[next]) next = v;
    }
    acc = contract(acc, LabeledTensor{s.site(next), site_labels(next)});
    absorbed[next] = true;
    for (auto w : g.neighbors(next)) ++absorbed_neighbors[w];
  }

  std::vector<int> order(n);
  for (std::size_t v = 0; v < n; ++v) order[v] = static_cast<int>(v);
  const DenseTensor full = arrange(acc, order);
  Vector psi(static_cast<Eigen::Index>(full.size()));
  for (std::size_t i = 0; i < full.size(); ++i) psi(static_cast<Eigen::Index>(i)) = full[i];
  const double nrm = psi.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalFailure("to_statevector: state has zero norm");
  return psi / nrm;
}

nlohmann::json to_json(const TensorNetworkState& s) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& t : s.site_tensors()) tensors.push_back(to_json(t));
  std::vector<std::size_t> bonds;
  for (std::size_t e = 0; e < s.graph().num_edges(); ++e) bonds.push_back(s.bond_dim(e));
  return {{"d", s.phys_dim()}, {"graph", to_json(s.graph())}, {"bond_dims", bonds}, {"tensors", tensors}};
}

TensorNetworkState state_from_json(const nlohmann::json& j) {
  try {
    Graph g = graph_from_json(j.at("graph"));
    std::vector<DenseTensor> tensors;
    for (const auto& t : j.at("tensors")) tensors.push_back(tensor_from_json(t));
    TensorNetworkState s(std::move(g), std::move(tensors));
    if (j.at("d").get<std::size_t>() != s.phys_dim()) throw InvalidInput("state JSON: d does not match tensors");
    const auto bonds = j.at("bond_dims").get<std::vector<std::size_t>>();
    if (bonds.size() != s.graph().num_edges()) throw InvalidInput("state JSON: bond_dims length mismatch");
    for (std::size_t e = 0; e < bonds.size(); ++e) {
      if (bonds[e] != s.bond_dim(e)) throw InvalidInput("state JSON: bond_dims do not match tensors");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("state JSON: ") + e.what());
  }
}

}  // namespace bptn
