#include <gtest/gtest.h>

#include <cmath>

#include "bptn/error.hpp"
#include "bptn/hamiltonian.hpp"
#include "bptn/oracles.hpp"
#include "bptn/pauli.hpp"
#include "support/reference.hpp"

using namespace bptn;

namespace {

// Full-space matrix assembled from Kronecker expansions of every term.
Matrix assembled(const Hamiltonian& h) {
  const Graph& g = h.graph();
  const std::size_t n = g.num_vertices();
  const auto dim = static_cast<Eigen::Index>(ref::ipow(2, n));
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t e = 0; e < g.num_edges(); ++e) m += ref::embed(h.edge_term(e), {g.edges()[e].a, g.edges()[e].b}, n, 2);
  for (std::size_t v = 0; v < n; ++v) m += ref::embed(h.vertex_term(v), {v}, n, 2);
  return m;
}

}  // namespace

TEST(MixedFieldIsing, Terms) {
  const Hamiltonian h = mixed_field_ising(cycle_graph(4), -1.0, -2.0, -0.5);
  EXPECT_EQ(h.edge_term(0), -1.0 * kron(pauli::Z(), pauli::Z()));
  EXPECT_EQ(h.vertex_term(2), Matrix(-2.0 * pauli::X() - 0.5 * pauli::Z()));
}

TEST(MixedFieldIsing, ZeroModelHasZeroEnergy) {
  const Hamiltonian h = mixed_field_ising(random_regular(8, 3, 1), 0.0, 0.0, 0.0);
  const Vector psi = to_statevector(random_state(h.graph(), 2, 4));
  EXPECT_EQ(apply_hamiltonian(h, psi).norm(), 0.0);
}

TEST(MixedFieldIsing, ClassicalGroundEnergy) {
  const Graph g = random_regular(10, 3, 2);
  EXPECT_NEAR(exact_diagonalize(mixed_field_ising(g, -1.0, 0.0, 0.0)).e0, -15.0, 1e-10);
}

TEST(MixedFieldIsing, EnergyIsReal) {
  const Hamiltonian h = mixed_field_ising(random_regular(8, 3, 3), -1.0, -2.0, -0.5);
  const Vector psi = to_statevector(random_state(h.graph(), 2, 6));
  EXPECT_LE(std::abs(psi.dot(apply_hamiltonian(h, psi)).imag()), 1e-10);
}

TEST(Tfim, TwoSiteGroundEnergy) {
  EXPECT_NEAR(exact_diagonalize(transverse_field_ising(path_graph(2), 1.0)).e0, -std::sqrt(5.0), 1e-10);
}

TEST(Tfim, ClassicalLimit) {
  const Graph g = random_regular(8, 3, 5);
  const EdResult ed = exact_diagonalize(transverse_field_ising(g, 0.0));
  EXPECT_NEAR(ed.e0, -12.0, 1e-10);
  EXPECT_NEAR(ed.e1, -12.0, 1e-10);
}

TEST(Tfim, LargeFieldLimit) {
  const Graph g = random_regular(8, 3, 5);
  const double hx = 50.0;
  const EdResult ed = exact_diagonalize(transverse_field_ising(g, hx));
  // E0 = -N hx + O(|E| / hx).
  EXPECT_NEAR(ed.e0 / (-8.0 * hx), 1.0, 1e-3);
  EXPECT_GE(fidelity(ed.v0, Vector::Constant(256, 1.0 / 16.0)), 0.99);
}

TEST(Tfim, CommutesWithGlobalFlip) {
  const Graph g = random_regular(8, 3, 7);
  const Hamiltonian h = transverse_field_ising(g, 1.3);
  const Graph& gg = h.graph();
  Matrix flip = Matrix::Identity(1, 1);
  for (std::size_t v = 0; v < 8; ++v) flip = kron(flip, pauli::X());
  Matrix edges = Matrix::Zero(256, 256), field = Matrix::Zero(256, 256);
  for (std::size_t e = 0; e < gg.num_edges(); ++e) edges += ref::embed(h.edge_term(e), {gg.edges()[e].a, gg.edges()[e].b}, 8, 2);
  for (std::size_t v = 0; v < 8; ++v) field += ref::embed(h.vertex_term(v), {v}, 8, 2);
  EXPECT_LE((edges * flip - flip * edges).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((field * flip - flip * field).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((dense_hamiltonian(h) * flip - flip * dense_hamiltonian(h)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Hamiltonian, DenseMatchesKroneckerAssembly) {
  const Hamiltonian h = mixed_field_ising(random_regular(6, 3, 1), -1.0, -2.0, -0.5);
  EXPECT_LE((dense_hamiltonian(h) - assembled(h)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Hamiltonian, RejectsNonHermitianTerms) {
  const Graph g = path_graph(2);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(Hamiltonian(g, {Matrix::Zero(4, 4)}, {bad, bad}), InvalidInput);
  EXPECT_THROW(Hamiltonian(g, {}, {pauli::X(), pauli::X()}), InvalidInput);
  EXPECT_THROW(Hamiltonian(g, {Matrix::Zero(3, 3)}, {pauli::X(), pauli::X()}), InvalidInput);
}

TEST(Hamiltonian, JsonModels) {
  const Graph g = cycle_graph(5);
  const Hamiltonian h = hamiltonian_from_json(model_json("tfim", {{"hx", 1.5}}, g));
  EXPECT_EQ(h.vertex_term(0), Matrix(-1.5 * pauli::X()));
  const Hamiltonian m = hamiltonian_from_json(model_json("mixed_field_ising", {{"jzz", -1}, {"hx", -2}, {"hz", -0.5}}, g));
  EXPECT_EQ(m.edge_term(1), -1.0 * kron(pauli::Z(), pauli::Z()));
  EXPECT_THROW(hamiltonian_from_json(model_json("heisenberg", {}, g)), InvalidInput);
  EXPECT_THROW(hamiltonian_from_json(model_json("tfim", {}, g)), InvalidInput);
}

TEST(ParentHamiltonian, BetaZeroTerms) {
  const Graph g = random_regular(6, 3, 2);
  for (const auto& t : sqrt_parent_hamiltonian(g, 0.0, 1.0)) {
    Matrix want = ref::embed(-pauli::X(), {0}, t.support.size(), 2);
    want += Matrix::Identity(want.rows(), want.cols());
    EXPECT_LE((t.op - want).cwiseAbs().maxCoeff(), 1e-14);
  }
  const Vector plus = Vector::Constant(64, 0.125);
  EXPECT_LE(apply_star_terms(sqrt_parent_hamiltonian(g, 0.0, 1.0), 6, plus).norm(), 1e-14);
}

TEST(ParentHamiltonian, StarTermsArePsd) {
  for (double beta : {0.2, 0.7, 1.5}) {
    for (const auto& t : sqrt_parent_hamiltonian(random_regular(8, 3, 1), beta, 1.0)) {
      EXPECT_GE(hermitian_eig(t.op).values.minCoeff(), -1e-10);
    }
  }
}

TEST(ParentHamiltonian, SquareRootStateIsZeroMode) {
  for (double beta : {0.3, 0.8}) {
    const Graph g = random_regular(12, 3, 3);
    const Vector psi = to_statevector(square_root_state(g, beta, 1.0));
    EXPECT_LE(apply_star_terms(sqrt_parent_hamiltonian(g, beta, 1.0), 12, psi).norm(), 1e-8);
  }
}
