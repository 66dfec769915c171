#include "bptn/hamiltonian.hpp"

#include <cmath>

#include "bptn/error.hpp"
#include "bptn/pauli.hpp"

namespace bptn {

Hamiltonian::Hamiltonian(Graph graph, std::vector<Matrix> edge_terms, std::vector<Matrix> vertex_terms)
    : graph_(std::move(graph)), edge_terms_(std::move(edge_terms)), vertex_terms_(std::move(vertex_terms)) {
  if (edge_terms_.size() != graph_.num_edges()) throw InvalidInput("need one edge term per graph edge");
  if (vertex_terms_.size() != graph_.num_vertices()) throw InvalidInput("need one vertex term per vertex");
  phys_dim_ = static_cast<std::size_t>(vertex_terms_.front().rows());
  const auto d = static_cast<Eigen::Index>(phys_dim_);
  for (const auto& h : vertex_terms_) {
    if (h.rows() != d || h.cols() != d) throw InvalidInput("vertex terms must be d x d");
    if (!is_hermitian(h, 1e-12)) throw InvalidInput("vertex term is not Hermitian");
  }
  for (const auto& h : edge_terms_) {
    if (h.rows() != d * d || h.cols() != d * d) throw InvalidInput("edge terms must be d^2 x d^2");
    if (!is_hermitian(h, 1e-12)) throw InvalidInput("edge term is not Hermitian");
  }
}

Hamiltonian mixed_field_ising(const Graph& g, double jzz, double hx, double hz) {
  const Matrix zz = jzz * kron(pauli::Z(), pauli::Z());
  const Matrix field = hx * pauli::X() + hz * pauli::Z();
  return Hamiltonian(g, std::vector<Matrix>(g.num_edges(), zz), std::vector<Matrix>(g.num_vertices(), field));
}

Hamiltonian transverse_field_ising(const Graph& g, double hx) {
  return mixed_field_ising(g, -1.0, -hx, 0.0);
}

std::vector<StarTerm> sqrt_parent_hamiltonian(const Graph& g, double beta, double j) {
  std::vector<StarTerm> terms;
  for (std::size_t a = 0; a < g.num_vertices(); ++a) {
    StarTerm t;
    t.support.push_back(a);
    for (auto b : g.neighbors(a)) t.support.push_back(b);
    const std::size_t k = t.support.size();
    const Eigen::Index dim = Eigen::Index{1} << k;
    // Z_a sum_b Z_b is diagonal, so its exponential is taken entrywise on the diagonal.
    Matrix op = Matrix::Zero(dim, dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
      auto spin = [&](std::size_t pos) { return ((idx >> (k - 1 - pos)) & 1) ? -1.0 : 1.0; };
      double field = 0.0;
      for (std::size_t pos = 1; pos < k; ++pos) field += spin(pos);
      op(idx, idx) = std::exp(-beta * j * spin(0) * field);
      op(idx ^ (Eigen::Index{1} << (k - 1)), idx) -= 1.0;  // -X on the center
    }
    t.op = std::move(op);
    terms.push_back(std::move(t));
  }
  return terms;
}

Hamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  try {
    const Graph g = graph_from_json(j.at("graph"));
    const auto model = j.at("model").get<std::string>();
    const auto& p = j.at("params");
    if (model == "mixed_field_ising") {
      return mixed_field_ising(g, p.at("jzz").get<double>(), p.at("hx").get<double>(), p.at("hz").get<double>());
    }
    if (model == "tfim") return transverse_field_ising(g, p.at("hx").get<double>());
    throw InvalidInput("unknown model '" + model + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("model JSON: ") + e.what());
  }
}

nlohmann::json model_json(const std::string& model, const nlohmann::json& params, const Graph& g) {
  return {{"model", model}, {"params", params}, {"graph", to_json(g)}};
}

}  // namespace bptn
