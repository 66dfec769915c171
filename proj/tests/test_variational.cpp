#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bptn/error.hpp"
#include "bptn/oracles.hpp"
#include "bptn/random.hpp"
#include "bptn/variational.hpp"
#include "support/reference.hpp"

using namespace bptn;

namespace {

MessageSet converged(const TensorNetworkState& s) {
  BpConfig cfg;
  cfg.max_steps = 200;
  cfg.rdm_tolerance = 1e-13;
  return run_bp(s, cfg).messages;
}

// Applies X to every physical leg: swaps the two halves of each site tensor.
TensorNetworkState flipped(const TensorNetworkState& s) {
  std::vector<DenseTensor> out = s.site_tensors();
  for (auto& t : out) {
    const std::size_t half = t.size() / 2;
    for (std::size_t k = 0; k < half; ++k) std::swap(t[k], t[k + half]);
  }
  return s.with_site_tensors(out);
}

TensorNetworkState with_entry_shifted(const TensorNetworkState& s, std::size_t site, std::size_t flat, cplx delta) {
  std::vector<DenseTensor> out = s.site_tensors();
  out[site][flat] += delta;
  return s.with_site_tensors(out);
}

// Two-site state from a 4-amplitude vector via SVD: A0[s, k] = U sqrt(S), A1[t, k] = conj(V) sqrt(S).
TensorNetworkState two_site_state(const Vector& psi) {
  Matrix m(2, 2);
  m << psi(0), psi(1), psi(2), psi(3);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd root = svd.singularValues().cwiseSqrt();
  const Matrix a0 = svd.matrixU() * root.asDiagonal();
  const Matrix a1 = svd.matrixV().conjugate() * root.asDiagonal();
  return TensorNetworkState(path_graph(2), {DenseTensor::from_matrix(a0), DenseTensor::from_matrix(a1)});
}

}  // namespace

TEST(Energy, ProductStates) {
  const Graph g = random_regular(10, 3, 1);
  Vector plus(2), up(2);
  plus << 1, 1;
  up << 1, 0;
  const TensorNetworkState sp = product_state(g, plus);
  EXPECT_NEAR(energy(sp, converged(sp), transverse_field_ising(g, 1.7)), -17.0, 1e-12);
  const TensorNetworkState su = product_state(g, up);
  EXPECT_NEAR(energy(su, converged(su), transverse_field_ising(g, 1.7)), -15.0, 1e-12);
}

TEST(Energy, ExactOnTrees) {
  const Graph g = build_tree(7, 2);
  const Hamiltonian h = mixed_field_ising(g, -1.0, -0.8, -0.3);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const TensorNetworkState s = random_state(g, 2, seed);
    EXPECT_NEAR(energy(s, converged(s), h), energy_expectation(h, to_statevector(s)), 1e-9);
  }
}

TEST(Energy, GlobalFlipInvariance) {
  const Graph g = random_regular(8, 3, 2);
  const Hamiltonian h = transverse_field_ising(g, 0.9);
  const TensorNetworkState s = random_state(g, 2, 4);
  const MessageSet m = converged(s);
  const TensorNetworkState f = flipped(s);
  EXPECT_NEAR(energy(s, m, h), energy(f, converged(f), h), 1e-9);
}

TEST(Energy, RejectsMismatchedGraph) {
  const TensorNetworkState s = random_state(cycle_graph(4), 2, 1);
  EXPECT_THROW(energy(s, converged(s), transverse_field_ising(path_graph(4), 1.0)), InvalidInput);
}

TEST(Gradient, ZeroHamiltonian) {
  const Graph g = random_regular(6, 3, 1);
  const TensorNetworkState s = random_state(g, 2, 2);
  for (const auto& t : energy_gradient(s, converged(s), mixed_field_ising(g, 0.0, 0.0, 0.0))) {
    EXPECT_EQ(t.norm(), 0.0);
  }
}

TEST(Gradient, MatchesFiniteDifferences) {
  const Graph g = random_regular(6, 3, 3);
  const Hamiltonian h = mixed_field_ising(g, -1.0, -1.2, -0.4);
  const TensorNetworkState s = random_state(g, 2, 5);
  const MessageSet m = converged(s);
  const auto grad = energy_gradient(s, m, h);
  const double eps = 1e-6;
  for (std::size_t site : {0u, 3u, 5u}) {
    for (std::size_t flat : {0u, 7u, 15u}) {
      const double d_re = (energy(with_entry_shifted(s, site, flat, eps), m, h) -
                           energy(with_entry_shifted(s, site, flat, -eps), m, h)) / (2 * eps);
      const double d_im = (energy(with_entry_shifted(s, site, flat, cplx(0, eps)), m, h) -
                           energy(with_entry_shifted(s, site, flat, cplx(0, -eps)), m, h)) / (2 * eps);
      EXPECT_NEAR(d_re, 2.0 * grad[site][flat].real(), 1e-6);
      EXPECT_NEAR(d_im, 2.0 * grad[site][flat].imag(), 1e-6);
    }
  }
}

TEST(Gradient, ReportsEnergy) {
  const Graph g = random_regular(6, 3, 1);
  const Hamiltonian h = transverse_field_ising(g, 1.0);
  const TensorNetworkState s = random_state(g, 2, 9);
  const MessageSet m = converged(s);
  double e = 0.0;
  energy_gradient(s, m, h, e, 2);
  EXPECT_NEAR(e, energy(s, m, h), 1e-12);
}

TEST(Gradient, ScaleCovariance) {
  const Graph g = random_regular(6, 3, 1);
  const Hamiltonian h = transverse_field_ising(g, 1.0);
  const TensorNetworkState s = random_state(g, 2, 11);
  const MessageSet m = converged(s);
  const cplx c(2.0, -1.5);
  std::vector<DenseTensor> scaled = s.site_tensors();
  scaled[2] *= c;
  const TensorNetworkState t = s.with_site_tensors(scaled);
  EXPECT_NEAR(energy(t, m, h), energy(s, m, h), 1e-12);
  const auto gs = energy_gradient(s, m, h);
  const auto gt = energy_gradient(t, m, h);
  for (std::size_t k = 0; k < gs[2].size(); ++k) EXPECT_LE(std::abs(gt[2][k] * std::conj(c) - gs[2][k]), 1e-12);
}

TEST(Energy, StationaryAtGroundStateOnTree) {
  // With messages reconverged after every move, the energy is the exact Rayleigh quotient,
  // so its first-order variation vanishes at an eigenvector.
  const Hamiltonian h = mixed_field_ising(path_graph(2), -1.0, -0.7, -0.2);
  const EdResult ed = exact_diagonalize(h);
  const TensorNetworkState s = two_site_state(ed.v0);
  EXPECT_NEAR(energy(s, converged(s), h), ed.e0, 1e-10);
  std::mt19937_64 rng(8);
  const double eps = 1e-4;
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<DenseTensor> plus = s.site_tensors(), minus = s.site_tensors();
    for (std::size_t v = 0; v < 2; ++v) {
      const DenseTensor d = ref::random_tensor(plus[v].shape(), rng);
      for (std::size_t k = 0; k < d.size(); ++k) {
        plus[v][k] += eps * d[k];
        minus[v][k] -= eps * d[k];
      }
    }
    const TensorNetworkState sp = s.with_site_tensors(plus), sm = s.with_site_tensors(minus);
    EXPECT_LE(std::abs(energy(sp, converged(sp), h) - energy(sm, converged(sm), h)) / (2 * eps), 1e-6);
  }
}

TEST(Gradient, ParallelMatchesSerial) {
  const Graph g = random_regular(10, 3, 2);
  const Hamiltonian h = transverse_field_ising(g, 1.3);
  const TensorNetworkState s = random_state(g, 2, 1);
  const MessageSet m = converged(s);
  const auto a = energy_gradient(s, m, h, 1);
  const auto b = energy_gradient(s, m, h, 3);
  for (std::size_t v = 0; v < a.size(); ++v) EXPECT_LE((a[v] - b[v]).norm(), 1e-14);
}

TEST(InitialState, Kinds) {
  const Graph g = random_regular(8, 3, 1);
  VarConfig cfg;
  cfg.noise = 0.0;
  cfg.chi = 3;
  const TensorNetworkState p = initial_state(g, cfg);
  EXPECT_EQ(p.max_bond_dim(), 3u);
  EXPECT_NEAR(fidelity(p, Vector::Constant(256, 1.0 / 16.0)), 1.0, 1e-12);

  cfg.chi = 2;
  cfg.init.kind = VarInit::Kind::SqrtState;
  cfg.init.beta = 0.4;
  EXPECT_NEAR(fidelity(initial_state(g, cfg), to_statevector(square_root_state(g, 0.4, 1.0))), 1.0, 1e-12);
  cfg.chi = 1;
  EXPECT_THROW(initial_state(g, cfg), InvalidInput);

  cfg.chi = 2;
  cfg.init.kind = VarInit::Kind::Random;
  cfg.init.seed = 5;
  EXPECT_NEAR(fidelity(initial_state(g, cfg), to_statevector(random_state(g, 2, 5))), 1.0, 1e-12);
}

TEST(InitialState, NoiseIsSeeded) {
  const Graph g = random_regular(8, 3, 1);
  VarConfig cfg;
  const Vector a = to_statevector(initial_state(g, cfg));
  const Vector b = to_statevector(initial_state(g, cfg));
  EXPECT_EQ(a, b);
  cfg.noise_seed = 2;
  EXPECT_GT((a - to_statevector(initial_state(g, cfg))).norm(), 1e-6);
}

TEST(VarConfig, Validation) {
  VarConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.t_var = 0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = VarConfig{};
  cfg.gamma = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = VarConfig{};
  cfg.chi = 0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = VarConfig{};
  cfg.noise = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(VariationalPrepare, EnergyDecreasesOnTree) {
  const Graph g = build_tree(10, 2);
  const Hamiltonian h = transverse_field_ising(g, 1.0);
  VarConfig cfg;
  cfg.t_var = 30;
  const VarTrace tr = variational_prepare(g, h, cfg);
  ASSERT_EQ(tr.iterations.size(), 30u);
  EXPECT_LT(tr.iterations.back().energy, tr.iterations.front().energy);
  // BP is exact on a tree, so the result is a variational upper bound.
  const double e0 = exact_diagonalize(h).e0;
  EXPECT_GE(tr.final_energy, e0 - 1e-9);
  EXPECT_NEAR(tr.final_energy, energy_expectation(h, to_statevector(tr.state)), 1e-8);
  EXPECT_TRUE(tr.final_bp_converged);
}

TEST(VariationalPrepare, DeepParamagnet) {
  const Graph g = random_regular(10, 3, 3);
  const Hamiltonian h = transverse_field_ising(g, 10.0);
  VarConfig cfg;
  cfg.t_var = 60;
  const VarTrace tr = variational_prepare(g, h, cfg);
  const double e0 = exact_diagonalize(h).e0;
  EXPECT_LT(tr.final_energy, -100.0);  // below the |+> product value -N hx
  EXPECT_LE(std::abs(tr.final_energy - e0) / std::abs(e0), 1e-2);
  EXPECT_GE(tr.final_observables.mean_x, 0.95);
}

TEST(VariationalPrepare, DescentCheckAborts) {
  const Graph g = random_regular(8, 3, 1);
  const Hamiltonian h = transverse_field_ising(g, 1.0);
  VarConfig cfg;
  cfg.t_var = 10;
  cfg.gamma = 50.0;
  cfg.init.kind = VarInit::Kind::Random;
  cfg.init.seed = 3;
  EXPECT_THROW(variational_prepare(g, h, cfg), NumericalFailure);
  cfg.check_descent = false;
  EXPECT_NO_THROW(variational_prepare(g, h, cfg));
}

TEST(VariationalPrepare, Deterministic) {
  const Graph g = random_regular(8, 3, 2);
  const Hamiltonian h = transverse_field_ising(g, 2.0);
  VarConfig cfg;
  cfg.t_var = 5;
  const VarTrace a = variational_prepare(g, h, cfg);
  cfg.threads = 2;
  const VarTrace b = variational_prepare(g, h, cfg);
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    EXPECT_NEAR(a.iterations[k].energy, b.iterations[k].energy, 1e-12);
  }
}

TEST(TfimSweep, OrderingAndRestartSeeds) {
  const Graph g = random_regular(6, 3, 1);
  VarConfig cfg;
  cfg.t_var = 3;
  const auto pts = tfim_sweep(g, {0.5, 2.0}, cfg, 2, 2);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[0].hx, 0.5);
  EXPECT_EQ(pts[1].restart, 1);
  EXPECT_EQ(pts[2].hx, 2.0);
  EXPECT_EQ(pts[3].restart, 1);
  cfg.noise_seed = derive_seed(1, 1);
  const VarTrace solo = variational_prepare(g, transverse_field_ising(g, 2.0), cfg);
  EXPECT_NEAR(solo.final_energy, pts[3].trace.final_energy, 1e-12);
  EXPECT_THROW(tfim_sweep(g, {1.0}, cfg, 0), InvalidInput);
}

TEST(TfimSweep, Summary) {
  std::vector<SweepPoint> pts(3);
  pts[0].hx = pts[1].hx = 1.0;
  pts[2].hx = 2.0;
  pts[0].trace.final_observables.mean_abs_z = 0.8;
  pts[1].trace.final_observables.mean_abs_z = 0.6;
  pts[0].trace.final_energy = -10.0;
  pts[1].trace.final_energy = -12.0;
  pts[2].trace.final_energy = -20.0;
  const auto s = summarize_sweep(pts, 4);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].mean_abs_z, 0.7, 1e-15);
  EXPECT_NEAR(s[0].abs_z_spread, 0.2, 1e-15);
  EXPECT_NEAR(s[0].energy_density, -3.0, 1e-15);
  EXPECT_NEAR(s[1].energy_density, -5.0, 1e-15);
}
