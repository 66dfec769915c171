#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bptn/error.hpp"
#include "bptn/oracles.hpp"
#include "bptn/pauli.hpp"
#include "support/reference.hpp"

using namespace bptn;

TEST(ApplyLocal, MatchesKroneckerEmbedding) {
  std::mt19937_64 rng(3);
  const std::size_t n = 5;
  const Vector psi = ref::random_matrix(32, 1, rng).col(0);
  for (const std::vector<std::size_t>& sites : {std::vector<std::size_t>{2}, std::vector<std::size_t>{4, 1},
                                                 std::vector<std::size_t>{0, 3, 2}}) {
    const auto dim = static_cast<Eigen::Index>(ref::ipow(2, sites.size()));
    const Matrix op = ref::random_matrix(dim, dim, rng);
    Vector out = Vector::Zero(32);
    apply_local(op, sites, n, 2, psi, out);
    EXPECT_LE((out - ref::embed(op, sites, n, 2) * psi).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ApplyLocal, QutritDigits) {
  std::mt19937_64 rng(4);
  const Vector psi = ref::random_matrix(27, 1, rng).col(0);
  const Matrix op = ref::random_matrix(9, 9, rng);
  Vector out = Vector::Zero(27);
  apply_local(op, {2, 0}, 3, 3, psi, out);
  EXPECT_LE((out - ref::embed(op, {2, 0}, 3, 3) * psi).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ExactDiagonalize, SingleEdgeTfim) {
  const EdResult ed = exact_diagonalize(transverse_field_ising(path_graph(2), 1.0));
  EXPECT_NEAR(ed.e0, -std::sqrt(5.0), 1e-10);
  EXPECT_LE(ed.e0, ed.e1);
}

TEST(ExactDiagonalize, IterativePathHandlesDegeneracy) {
  // N = 12 takes the Lanczos path; hx = 0 has the two-fold all-up / all-down ground space.
  const Graph g = random_regular(12, 3, 4);
  const EdResult ed = exact_diagonalize(transverse_field_ising(g, 0.0));
  EXPECT_NEAR(ed.e0, -18.0, 1e-9);
  EXPECT_NEAR(ed.e1, -18.0, 1e-9);
  EXPECT_NEAR(std::abs(ed.v0.dot(ed.v1)), 0.0, 1e-8);
}

TEST(ExactDiagonalize, IterativeResidualsAndBound) {
  const Graph g = random_regular(12, 3, 6);
  const Hamiltonian h = mixed_field_ising(g, -1.0, -2.0, -0.5);
  const EdResult ed = exact_diagonalize(h);
  EXPECT_LE((apply_hamiltonian(h, ed.v0) - ed.e0 * ed.v0).norm(), 1e-9);
  EXPECT_LE((apply_hamiltonian(h, ed.v1) - ed.e1 * ed.v1).norm(), 1e-9);
  EXPECT_LT(ed.e0, ed.e1);
  EXPECT_NEAR(std::abs(ed.v0.dot(ed.v1)), 0.0, 1e-8);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector psi = ref::random_matrix(4096, 1, rng).col(0);
    EXPECT_GE(energy_expectation(h, psi), ed.e0);
  }
}

TEST(ExactDiagonalize, DenseAgreesWithKroneckerSpectrum) {
  const Graph g = random_regular(8, 3, 2);
  const Hamiltonian h = mixed_field_ising(g, -1.0, -2.0, -0.5);
  Matrix full = Matrix::Zero(256, 256);
  for (std::size_t e = 0; e < g.num_edges(); ++e) full += ref::embed(h.edge_term(e), {g.edges()[e].a, g.edges()[e].b}, 8, 2);
  for (std::size_t v = 0; v < 8; ++v) full += ref::embed(h.vertex_term(v), {v}, 8, 2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(full);
  const EdResult ed = exact_diagonalize(h);
  EXPECT_NEAR(ed.e0, es.eigenvalues()(0), 1e-10);
  EXPECT_NEAR(ed.e1, es.eigenvalues()(1), 1e-10);
}

TEST(ExactDiagonalize, SizeGuard) {
  EXPECT_THROW(exact_diagonalize(transverse_field_ising(path_graph(15), 1.0)), InvalidInput);
}

TEST(Fidelity, Examples) {
  const Graph g = random_regular(6, 3, 1);
  const auto s = random_state(g, 2, 3);
  const Vector psi = to_statevector(s);
  EXPECT_NEAR(fidelity(s, psi), 1.0, 1e-12);
  Vector zero(2), plus(2);
  zero << 1, 0;
  plus << 1, 1;
  EXPECT_NEAR(fidelity(product_state(g, zero), to_statevector(product_state(g, plus))), 1.0 / 64.0, 1e-14);
}

TEST(Fidelity, GlobalPhaseInvariance) {
  std::mt19937_64 rng(2);
  const Vector a = ref::random_matrix(16, 1, rng).col(0);
  const Vector b = ref::random_matrix(16, 1, rng).col(0);
  const cplx phase = std::polar(1.0, 0.7);
  EXPECT_NEAR(fidelity(a, b), fidelity(phase * a, b), 1e-15);
  EXPECT_NEAR(fidelity(a, b), fidelity(a, std::conj(phase) * b), 1e-15);
  EXPECT_GE(fidelity(a, b), 0.0);
  EXPECT_LE(fidelity(a, b), 1.0);
}

TEST(GroundSpaceOverlap, Examples) {
  const EdResult ed = exact_diagonalize(transverse_field_ising(random_regular(8, 3, 3), 0.7));
  EXPECT_NEAR(ground_space_overlap(ed.v0, ed), 1.0, 1e-12);
  EXPECT_NEAR(ground_space_overlap(Vector((ed.v0 + ed.v1) / std::sqrt(2.0)), ed), 1.0, 1e-12);
  // A symmetry-broken state sits in the ground space without matching v0 alone.
  const Vector broken = (ed.v0 + ed.v1) / std::sqrt(2.0);
  EXPECT_LT(fidelity(broken, ed.v0), 0.6);
}

TEST(ClassicalMc, InfiniteTemperature) {
  const Graph g = random_regular(20, 3, 1);
  McConfig cfg;
  cfg.sweeps = 6000;
  const McResult r = classical_ising_mc(g, 0.0, 1.0, cfg);
  EXPECT_EQ(r.samples, 5000u);
  EXPECT_LE(r.mean_abs_magnetization, 3.0 * r.mean_abs_magnetization_se);
  for (double se : r.magnetization_se) EXPECT_GT(se, 0.0);
}

TEST(ClassicalMc, SingleEdgeCorrelation) {
  McConfig cfg;
  cfg.seed = 5;
  const McResult r = classical_ising_mc(path_graph(2), 0.5, 1.0, cfg);
  EXPECT_LE(std::abs(r.edge_correlation[0] - std::tanh(0.5)), 3.0 * r.edge_correlation_se[0]);
}

TEST(ClassicalMc, AgreesWithEnumeration) {
  int total = 0, inside = 0;
  for (std::uint64_t seed : {1u, 2u}) {
    const Graph g = random_regular(12, 3, seed);
    for (double beta : {0.1, 0.25, 0.4, 0.55}) {
      McConfig cfg;
      cfg.seed = seed * 100 + static_cast<std::uint64_t>(beta * 100);
      const McResult r = classical_ising_mc(g, beta, 1.0, cfg);
      const ClassicalExact ex = classical_exact_expectations(g, beta, 1.0);
      for (std::size_t a = 0; a < 12; ++a) {
        ++total;
        inside += std::abs(r.magnetization[a] - ex.z[a]) <= 3.0 * r.magnetization_se[a];
      }
    }
  }
  EXPECT_GE(inside, static_cast<int>(std::ceil(0.95 * total))) << inside << " of " << total;
}

TEST(ClassicalMc, DeterministicAndValidated) {
  const Graph g = random_regular(10, 3, 1);
  McConfig cfg;
  cfg.sweeps = 2000;
  const McResult a = classical_ising_mc(g, 0.3, 1.0, cfg);
  const McResult b = classical_ising_mc(g, 0.3, 1.0, cfg);
  EXPECT_EQ(a.magnetization, b.magnetization);
  cfg.sweeps = cfg.burn_in;
  EXPECT_THROW(classical_ising_mc(g, 0.3, 1.0, cfg), InvalidInput);
}

TEST(ClassicalExact, InfiniteTemperature) {
  const ClassicalExact ex = classical_exact_expectations(random_regular(8, 3, 1), 0.0, 1.0);
  for (double z : ex.z) EXPECT_NEAR(z, 0.0, 1e-15);
  for (double x : ex.x) EXPECT_NEAR(x, 1.0, 1e-15);
}

TEST(ClassicalExact, MatchesStatevectorObservables) {
  for (const auto& g : {path_graph(2), random_regular(10, 3, 2)}) {
    const std::size_t n = g.num_vertices();
    const double beta = 0.7, j = 1.0;
    const Vector psi = to_statevector(square_root_state(g, beta, j));
    const ClassicalExact ex = classical_exact_expectations(g, beta, j);
    for (std::size_t a = 0; a < n; ++a) {
      const Matrix rho = ref::partial_trace(psi, n, 2, {a});
      EXPECT_NEAR((rho * pauli::X()).trace().real(), ex.x[a], 1e-10);
      EXPECT_NEAR((rho * pauli::Z()).trace().real(), ex.z[a], 1e-10);
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const Matrix rho = ref::partial_trace(psi, n, 2, {g.edges()[e].a, g.edges()[e].b});
      EXPECT_NEAR((rho * kron(pauli::Z(), pauli::Z())).trace().real(), ex.zz[e], 1e-10);
    }
  }
}

TEST(ClassicalExact, SizeGuard) {
  EXPECT_THROW(classical_exact_expectations(cycle_graph(17), 0.1, 1.0), InvalidInput);
}
