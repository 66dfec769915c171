#include "bptn/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bptn/error.hpp"
#include "bptn/random.hpp"

namespace bptn {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

void apply_local(const Matrix& op, const std::vector<std::size_t>& sites, std::size_t n, std::size_t d,
                 const Vector& psi, Vector& out) {
  const std::size_t k = sites.size();
  const std::size_t local_dim = ipow(d, k);
  if (static_cast<std::size_t>(op.rows()) != local_dim || static_cast<std::size_t>(op.cols()) != local_dim) {
    throw InvalidInput("apply_local: operator dimension does not match the site count");
  }
  const std::size_t dim = ipow(d, n);
  if (static_cast<std::size_t>(psi.size()) != dim || out.size() != psi.size()) {
    throw InvalidInput("apply_local: vector dimension mismatch");
  }
  std::vector<std::size_t> stride(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (sites[i] >= n) throw InvalidInput("apply_local: site out of range");
    stride[i] = ipow(d, n - 1 - sites[i]);
  }
  // offset[r] = position contribution of local configuration r.
  std::vector<std::size_t> offset(local_dim, 0);
  for (std::size_t r = 0; r < local_dim; ++r) {
    std::size_t rem = r;
    for (std::size_t i = k; i-- > 0;) {
      offset[r] += (rem % d) * stride[i];
      rem /= d;
    }
  }
  for (std::size_t x = 0; x < dim; ++x) {
    const cplx amp = psi(static_cast<Eigen::Index>(x));
    if (amp == cplx{}) continue;
    std::size_t in = 0;
    for (std::size_t i = 0; i < k; ++i) in = in * d + (x / stride[i]) % d;
    const std::size_t base = x - offset[in];
    for (std::size_t r = 0; r < local_dim; ++r) {
      const cplx c = op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(in));
      if (c != cplx{}) out(static_cast<Eigen::Index>(base + offset[r])) += c * amp;
    }
  }
}

Vector apply_hamiltonian(const Hamiltonian& h, const Vector& psi) {
  const Graph& g = h.graph();
  const std::size_t n = g.num_vertices();
  Vector out = Vector::Zero(psi.size());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    apply_local(h.edge_term(e), {g.edges()[e].a, g.edges()[e].b}, n, h.phys_dim(), psi, out);
  }
  for (std::size_t v = 0; v < n; ++v) apply_local(h.vertex_term(v), {v}, n, h.phys_dim(), psi, out);
  return out;
}

Matrix dense_hamiltonian(const Hamiltonian& h) {
  const std::size_t n = h.graph().num_vertices();
  if (n > 12) throw InvalidInput("dense_hamiltonian: N must be <= 12");
  const auto dim = static_cast<Eigen::Index>(ipow(h.phys_dim(), n));
  Matrix m(dim, dim);
  Vector basis = Vector::Zero(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    basis(c) = 1.0;
    m.col(c) = apply_hamiltonian(h, basis);
    basis(c) = 0.0;
  }
  return m;
}

double energy_expectation(const Hamiltonian& h, const Vector& psi) {
  return psi.dot(apply_hamiltonian(h, psi)).real() / psi.squaredNorm();
}

Vector apply_star_terms(const std::vector<StarTerm>& terms, std::size_t n, const Vector& psi) {
  Vector out = Vector::Zero(psi.size());
  for (const auto& t : terms) apply_local(t.op, t.support, n, 2, psi, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Eigenpair {
  double value;
  Vector vector;
};

void orthogonalize(Vector& w, const std::vector<Vector>& basis) {
  for (const auto& q : basis) w -= q.dot(w) * q;
}

// Lowest eigenpair of a Hermitian operator restricted to the complement of `deflate`,
// by Lanczos with full reorthogonalization and explicit restarts from the Ritz vector.
Eigenpair lanczos_lowest(const std::function<Vector(const Vector&)>& apply, Eigen::Index dim,
                         const std::vector<Vector>& deflate, std::uint64_t seed) {
  constexpr double kResidualTarget = 1e-10;
  Rng rng(seed);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = cplx{re, im};
  }
  orthogonalize(v, deflate);
  v.normalize();
  const Eigen::Index krylov_max = std::min<Eigen::Index>(dim - static_cast<Eigen::Index>(deflate.size()), 150);

  for (int restart = 0; restart < 200; ++restart) {
    std::vector<Vector> q{v};
    std::vector<double> alpha, beta;
    for (Eigen::Index k = 0; k < krylov_max; ++k) {
      Vector w = apply(q[k]);
      alpha.push_back(q[k].dot(w).real());
      for (int pass = 0; pass < 2; ++pass) {
        orthogonalize(w, deflate);
        orthogonalize(w, q);
      }
      const double b = w.norm();
      const auto m = static_cast<Eigen::Index>(alpha.size());
      const bool exhausted = b < 1e-12 || m == krylov_max;
      if (m % 10 == 0 || exhausted) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
          t(i, i) = alpha[i];
          if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
        const Eigen::VectorXd y = tri.eigenvectors().col(0);
        const double estimate = b * std::abs(y(m - 1));
        if (estimate < 0.1 * kResidualTarget || exhausted) {
          Vector ritz = Vector::Zero(dim);
          for (Eigen::Index i = 0; i < m; ++i) ritz += y(i) * q[i];
          orthogonalize(ritz, deflate);
          ritz.normalize();
          const Vector hr = apply(ritz);
          const double value = ritz.dot(hr).real();
          if ((hr - value * ritz).norm() <= kResidualTarget) return {value, ritz};
          v = ritz;
          break;
        }
      }
      beta.push_back(b);
      q.push_back(w / b);
    }
  }
  throw NumericalFailure("Lanczos did not reach the residual target");
}

}  // namespace

EdResult exact_diagonalize(const Hamiltonian& h) {
  const std::size_t n = h.graph().num_vertices();
  if (n > 14) throw InvalidInput("exact_diagonalize: N must be <= 14");
  const std::size_t dim = ipow(h.phys_dim(), n);
  if (dim > (std::size_t{1} << 14)) throw InvalidInput("exact_diagonalize: Hilbert space too large");
  if (dim < 2) throw InvalidInput("exact_diagonalize: need at least two states");

  EdResult r;
  if (n <= 10) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(dense_hamiltonian(h));
    if (solver.info() != Eigen::Success) throw NumericalFailure("dense eigensolver failed");
    r.e0 = solver.eigenvalues()(0);
    r.e1 = solver.eigenvalues()(1);
    r.v0 = solver.eigenvectors().col(0);
    r.v1 = solver.eigenvectors().col(1);
  } else {
    auto apply = [&h](const Vector& x) { return apply_hamiltonian(h, x); };
    const auto d = static_cast<Eigen::Index>(dim);
    Eigenpair p0 = lanczos_lowest(apply, d, {}, 17);
    Eigenpair p1 = lanczos_lowest(apply, d, {p0.vector}, 29);
    r.e0 = p0.value;
    r.v0 = std::move(p0.vector);
    r.e1 = p1.value;
    r.v1 = std::move(p1.vector);
  }
  for (const auto& [e, v] : {std::pair{r.e0, &r.v0}, std::pair{r.e1, &r.v1}}) {
    const double residual = (apply_hamiltonian(h, *v) - e * *v).norm();
    if (residual > 1e-9) throw NumericalFailure("ED residual " + std::to_string(residual) + " exceeds 1e-9");
  }
  return r;
}

double fidelity(const Vector& psi, const Vector& v) {
  if (psi.size() != v.size()) throw InvalidInput("fidelity: dimension mismatch");
  return std::norm(v.dot(psi)) / (psi.squaredNorm() * v.squaredNorm());
}

double fidelity(const TensorNetworkState& s, const Vector& v) { return fidelity(to_statevector(s), v); }

double ground_space_overlap(const Vector& psi, const EdResult& ed) {
  return fidelity(psi, ed.v0) + fidelity(psi, ed.v1);
}

double ground_space_overlap(const TensorNetworkState& s, const EdResult& ed) {
  if (s.num_sites() > 14) throw InvalidInput("ground_space_overlap: N must be <= 14");
  return ground_space_overlap(to_statevector(s), ed);
}

// ---------------------------------------------------------------------------

void McConfig::validate() const {
  if (sweeps <= burn_in) throw InvalidInput("MC sweeps must exceed burn_in");
  if (batches < 2) throw InvalidInput("MC needs at least 2 batches");
  if (sweeps - burn_in < batches) throw InvalidInput("MC needs at least one sample per batch");
}

McResult classical_ising_mc(const Graph& g, double beta, double j, const McConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  Rng rng(cfg.seed);
  std::vector<int> spin(n, 1);
  if (!cfg.cold_start) {
    for (auto& s : spin) s = rng.below(2) ? 1 : -1;
  }
  // Acceptance exp(-2 beta J s_a h_a) tabulated by s_a h_a in [-maxdeg, maxdeg].
  const int maxdeg = static_cast<int>(g.max_degree());
  std::vector<double> accept(2 * maxdeg + 1);
  for (int k = -maxdeg; k <= maxdeg; ++k) accept[k + maxdeg] = std::exp(-2.0 * beta * j * k);

  auto sweep = [&] {
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t a = rng.below(n);
      int field = 0;
      for (auto b : g.neighbors(a)) field += spin[b];
      const double acc = accept[spin[a] * field + maxdeg];
      if (acc >= 1.0 || rng.uniform() < acc) spin[a] = -spin[a];
    }
  };
  for (std::uint64_t t = 0; t < cfg.burn_in; ++t) sweep();

  const std::uint64_t samples = cfg.sweeps - cfg.burn_in;
  const std::uint64_t batch_len = samples / cfg.batches;
  const std::uint64_t used = batch_len * cfg.batches;
  std::vector<std::vector<double>> site_batch(cfg.batches, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> edge_batch(cfg.batches, std::vector<double>(m, 0.0));
  for (std::uint64_t t = 0; t < samples; ++t) {
    sweep();
    if (t >= used) continue;
    const std::size_t b = t / batch_len;
    for (std::size_t a = 0; a < n; ++a) site_batch[b][a] += spin[a];
    for (std::size_t e = 0; e < m; ++e) edge_batch[b][e] += spin[g.edges()[e].a] * spin[g.edges()[e].b];
  }

  const double floor_se = 1.0 / static_cast<double>(used);
  auto summarize = [&](const std::vector<std::vector<double>>& batch, std::size_t count,
                       std::vector<double>& mean, std::vector<double>& se) {
    mean.assign(count, 0.0);
    se.assign(count, 0.0);
    const auto nb = static_cast<double>(cfg.batches);
    for (std::size_t i = 0; i < count; ++i) {
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t b = 0; b < cfg.batches; ++b) {
        const double x = batch[b][i] / static_cast<double>(batch_len);
        sum += x;
        sum_sq += x * x;
      }
      mean[i] = sum / nb;
      const double var = std::max(0.0, (sum_sq - nb * mean[i] * mean[i]) / (nb - 1.0));
      se[i] = std::max(std::sqrt(var / nb), floor_se);
    }
  };

  McResult r;
  r.config = cfg;
  r.samples = samples;
  summarize(site_batch, n, r.magnetization, r.magnetization_se);
  summarize(edge_batch, m, r.edge_correlation, r.edge_correlation_se);
  // |.| is 1-Lipschitz, so the mean of per-site errors bounds the error of the site
  // average of |<s_a>| even when sites are fully correlated.
  for (std::size_t a = 0; a < n; ++a) {
    r.mean_abs_magnetization += std::abs(r.magnetization[a]) / static_cast<double>(n);
    r.mean_abs_magnetization_se += r.magnetization_se[a] / static_cast<double>(n);
  }
  return r;
}

ClassicalExact classical_exact_expectations(const Graph& g, double beta, double j) {
  const std::size_t n = g.num_vertices();
  if (n > 16) throw InvalidInput("classical_exact_expectations: N must be <= 16");
  const std::size_t m = g.num_edges();
  const std::uint32_t count = 1u << n;
  auto spin = [n](std::uint32_t config, std::size_t v) { return ((config >> (n - 1 - v)) & 1u) ? -1 : 1; };

  // Gibbs weight exp(beta J E(s)) shifted by its maximum over configurations.
  const double coupling = beta * j;
  const double shift = std::abs(coupling) * static_cast<double>(m);
  ClassicalExact out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(m, 0.0)};
  double z = 0.0;
  for (std::uint32_t c = 0; c < count; ++c) {
    int energy = 0;
    for (const auto& e : g.edges()) energy += spin(c, e.a) * spin(c, e.b);
    const double w = std::exp(coupling * energy - shift);
    z += w;
    for (std::size_t a = 0; a < n; ++a) {
      const int sa = spin(c, a);
      int field = 0;
      for (auto b : g.neighbors(a)) field += spin(c, b);
      out.z[a] += w * sa;
      // w(s) w(s^a) / w(s)^2 = exp(-beta J s_a h_a)
      out.x[a] += w * std::exp(-coupling * sa * field);
    }
    for (std::size_t e = 0; e < m; ++e) out.zz[e] += w * spin(c, g.edges()[e].a) * spin(c, g.edges()[e].b);
  }
  for (auto& v : out.z) v /= z;
  for (auto& v : out.x) v /= z;
  for (auto& v : out.zz) v /= z;
  return out;
}

}  // namespace bptn
