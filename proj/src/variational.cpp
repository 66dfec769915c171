#include "bptn/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bptn/error.hpp"
#include "bptn/parallel.hpp"
#include "bptn/random.hpp"

namespace bptn {

void VarConfig::validate() const {
  if (t_var < 1 || t_bp < 1 || n_gd < 1) throw InvalidInput("t_var, t_bp and n_gd must be >= 1");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
  if (chi < 1) throw InvalidInput("chi must be >= 1");
  if (!(noise >= 0.0)) throw InvalidInput("noise must be non-negative");
  final_bp.validate();
}

namespace {

struct Term {
  std::vector<std::size_t> sites;
  const Matrix* op;
};

std::vector<Term> local_terms(const Hamiltonian& h) {
  const Graph& g = h.graph();
  std::vector<Term> terms;
  terms.reserve(g.num_edges() + g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) terms.push_back({{g.edges()[e].a, g.edges()[e].b}, &h.edge_term(e)});
  for (std::size_t v = 0; v < g.num_vertices(); ++v) terms.push_back({{v}, &h.vertex_term(v)});
  return terms;
}

void check_compatible(const TensorNetworkState& s, const Hamiltonian& h) {
  if (!(s.graph() == h.graph())) throw InvalidInput("Hamiltonian and state live on different graphs");
  if (s.phys_dim() != h.phys_dim()) throw InvalidInput("Hamiltonian and state have different physical dimensions");
}

std::vector<DenseTensor> normalized_sites(std::vector<DenseTensor> tensors) {
  for (auto& t : tensors) {
    const double norm = t.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalFailure("site tensor norm vanished or diverged");
    t *= cplx{1.0 / norm};
  }
  return tensors;
}

// Rescales every site so that its single-site contraction with the messages has unit trace.
std::vector<DenseTensor> bp_normalized_sites(const TensorNetworkState& s, const MessageSet& msgs) {
  const LocalNetwork net(s, msgs);
  std::vector<DenseTensor> tensors = s.site_tensors();
  for (std::size_t v = 0; v < tensors.size(); ++v) {
    const double d = net.raw_rdm({v}).trace().real();
    if (!(d > 0.0) || !std::isfinite(d)) throw NumericalFailure("site norm under the messages vanished");
    tensors[v] *= cplx{1.0 / std::sqrt(d)};
  }
  return tensors;
}

}  // namespace

double energy(const TensorNetworkState& s, const MessageSet& msgs, const Hamiltonian& h) {
  check_compatible(s, h);
  double e = 0.0;
  for (const auto& t : local_terms(h)) e += expectation(rdm(s, msgs, t.sites), *t.op);
  return e;
}

std::vector<DenseTensor> energy_gradient(const TensorNetworkState& s, const MessageSet& msgs,
                                         const Hamiltonian& h, std::size_t threads) {
  double unused = 0.0;
  return energy_gradient(s, msgs, h, unused, threads);
}

std::vector<DenseTensor> energy_gradient(const TensorNetworkState& s, const MessageSet& msgs,
                                         const Hamiltonian& h, double& energy_out, std::size_t threads) {
  check_compatible(s, h);
  const Graph& g = s.graph();
  const LocalNetwork net(s, msgs);
  const auto terms = local_terms(h);

  std::vector<double> denom(terms.size());
  std::vector<double> local_energy(terms.size());
  parallel_for(terms.size(), threads, [&](std::size_t k) {
    const Matrix rho = hermitize(net.raw_rdm(terms[k].sites));
    const double d = rho.trace().real();
    if (!(d > 0.0) || !std::isfinite(d)) throw NumericalFailure("local norm vanished in energy gradient");
    denom[k] = d;
    local_energy[k] = (rho * *terms[k].op).trace().real() / d;
  });

  std::vector<std::vector<std::size_t>> terms_of(g.num_vertices());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (auto v : terms[k].sites) terms_of[v].push_back(k);
  }

  std::vector<DenseTensor> grad(g.num_vertices());
  parallel_for(g.num_vertices(), threads, [&](std::size_t i) {
    DenseTensor acc(s.site(i).shape());
    for (auto k : terms_of[i]) {
      const Matrix& op = *terms[k].op;
      const Matrix shifted = op - local_energy[k] * Matrix::Identity(op.rows(), op.cols());
      DenseTensor part = net.raw_gradient(terms[k].sites, i, shifted);
      part *= cplx{1.0 / denom[k]};
      acc += part;
    }
    grad[i] = std::move(acc);
  });

  energy_out = 0.0;
  for (double e : local_energy) energy_out += e;
  return grad;
}

TensorNetworkState initial_state(const Graph& g, const VarConfig& cfg) {
  TensorNetworkState s;
  switch (cfg.init.kind) {
    case VarInit::Kind::Product: {
      Vector local = cfg.init.local;
      if (local.size() == 0) local = Vector::Constant(2, cplx{1.0 / std::sqrt(2.0)});
      s = pad_bonds(product_state(g, local), cfg.chi);
      break;
    }
    case VarInit::Kind::SqrtState:
      if (cfg.chi < 2) throw InvalidInput("square-root-state initialization needs chi >= 2");
      s = pad_bonds(square_root_state(g, cfg.init.beta, cfg.init.j), cfg.chi);
      break;
    case VarInit::Kind::Random:
      s = random_state(g, cfg.chi, cfg.init.seed);
      break;
  }
  if (cfg.noise > 0.0) s = perturb(s, cfg.noise, cfg.noise_seed);
  return s;
}

VarTrace variational_prepare(const Graph& g, const Hamiltonian& h, const VarConfig& cfg) {
  cfg.validate();
  if (!(h.graph() == g)) throw InvalidInput("Hamiltonian graph differs from the requested graph");
  TensorNetworkState state = initial_state(g, cfg);
  state = state.with_site_tensors(normalized_sites(state.site_tensors()));
  check_compatible(state, h);
  MessageSet msgs = init_messages(state, cfg.final_bp.init);

  VarTrace trace;
  for (int t = 0; t < cfg.t_var; ++t) {
    for (int k = 0; k < cfg.t_bp; ++k) msgs = bp_step(state, msgs, cfg.final_bp.damping, cfg.threads);

    double e_prev = 0.0;
    auto grad = energy_gradient(state, msgs, h, e_prev, cfg.threads);
    for (int k = 0; k < cfg.n_gd; ++k) {
      std::vector<DenseTensor> next = state.site_tensors();
      for (std::size_t v = 0; v < next.size(); ++v) {
        DenseTensor step = grad[v];
        step *= cplx{cfg.gamma};
        next[v] -= step;
      }
      // Each local term is scale invariant per site, so renormalizing is a pure gauge choice.
      // Fixing the message-weighted site norm keeps gradients bounded where Frobenius
      // normalization lets that norm collapse.
      state = state.with_site_tensors(std::move(next));
      state = state.with_site_tensors(bp_normalized_sites(state, msgs));
      double e_now = 0.0;
      if (k + 1 < cfg.n_gd) {
        grad = energy_gradient(state, msgs, h, e_now, cfg.threads);
      } else {
        e_now = energy(state, msgs, h);
      }
      if (cfg.check_descent && e_now > e_prev + 1e-10 * std::max(1.0, std::abs(e_prev))) {
        throw NumericalFailure("frozen-message energy rose from " + std::to_string(e_prev) + " to " +
                               std::to_string(e_now) + " at outer iteration " + std::to_string(t) +
                               "; reduce gamma (currently " + std::to_string(cfg.gamma) + ")");
      }
      e_prev = e_now;
    }

    const SiteAverages obs = site_averaged_observables(state, msgs);
    trace.iterations.push_back({e_prev, obs.mean_abs_z, obs.mean_x, obs.mean_zz});
  }

  BpConfig final_bp = cfg.final_bp;
  final_bp.threads = cfg.threads;
  BpResult final_run = run_bp(state, final_bp, msgs);
  trace.final_bp_converged = final_run.diagnostics.converged;
  trace.messages = std::move(final_run.messages);
  trace.final_energy = energy(state, trace.messages, h);
  trace.final_observables = site_averaged_observables(state, trace.messages);
  trace.state = std::move(state);

  const auto& it = trace.iterations;
  if (it.size() >= 3) {
    const auto [lo, hi] = std::minmax({it[it.size() - 1].energy, it[it.size() - 2].energy, it[it.size() - 3].energy});
    trace.energy_converged = hi - lo <= 1e-6;
  }
  return trace;
}

std::vector<SweepPoint> tfim_sweep(const Graph& g, const std::vector<double>& hx_values, const VarConfig& cfg,
                                   int restarts, std::size_t threads) {
  if (restarts < 1) throw InvalidInput("restarts must be >= 1");
  cfg.validate();
  const auto per_hx = static_cast<std::size_t>(restarts);
  std::vector<SweepPoint> out(hx_values.size() * per_hx);
  parallel_for(out.size(), threads, [&](std::size_t job) {
    const double hx = hx_values[job / per_hx];
    const int restart = static_cast<int>(job % per_hx);
    VarConfig local = cfg;
    local.threads = 1;
    local.noise_seed = derive_seed(cfg.noise_seed, static_cast<std::uint64_t>(restart));
    out[job] = {hx, restart, variational_prepare(g, transverse_field_ising(g, hx), local)};
  });
  return out;
}

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepPoint>& points, std::size_t num_sites) {
  std::vector<SweepSummary> out;
  for (std::size_t begin = 0; begin < points.size();) {
    std::size_t end = begin;
    while (end < points.size() && points[end].hx == points[begin].hx) ++end;
    const auto count = static_cast<double>(end - begin);
    SweepSummary s;
    s.hx = points[begin].hx;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = begin; k < end; ++k) {
      const auto& obs = points[k].trace.final_observables;
      s.mean_abs_z += obs.mean_abs_z / count;
      s.mean_x += obs.mean_x / count;
      s.mean_zz += obs.mean_zz / count;
      lo = std::min(lo, obs.mean_abs_z);
      hi = std::max(hi, obs.mean_abs_z);
      best = std::min(best, points[k].trace.final_energy);
    }
    s.abs_z_spread = hi - lo;
    s.energy_density = best / static_cast<double>(num_sites);
    out.push_back(s);
    begin = end;
  }
  return out;
}

}  // namespace bptn
