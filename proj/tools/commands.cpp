#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "bptn/bp.hpp"
#include "bptn/error.hpp"
#include "bptn/graph.hpp"
#include "bptn/hamiltonian.hpp"
#include "bptn/oracles.hpp"
#include "bptn/pauli.hpp"
#include "bptn/random.hpp"
#include "bptn/states.hpp"
#include "bptn/variational.hpp"

namespace bptn::cli {

using nlohmann::json;

void Params::merge(const json& config) const {
  if (!config.is_object()) throw InvalidInput("config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    bool known = false;
    for (const auto& b : bindings_) {
      if (b.name != key) continue;
      known = true;
      if (b.option->count() > 0) break;
      try {
        b.load(value);
      } catch (const json::exception& e) {
        throw InvalidInput("config key '" + key + "': " + e.what());
      }
    }
    if (!known && key != "command") throw InvalidInput("unknown config key '" + key + "'");
  }
}

json Params::resolved() const {
  json out = json::object();
  for (const auto& b : bindings_) out[b.name] = b.dump();
  return out;
}

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const Common& common, const std::string& name) {
  fs::create_directories(common.out_dir);
  const fs::path path = fs::path(common.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.precision(std::numeric_limits<double>::max_digits10);
  return out;
}

void write_json(const Common& common, const std::string& name, const json& j) {
  open_output(common, name) << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

/// State shared by one subcommand between registration and its callback.
struct Command {
  explicit Command(CLI::App* sub) : app(sub), params(sub) {
    sub->add_option("--config", common.config, "JSON file with option values (command-line flags win)");
    params.add("seed", common.seed, "Seed for graph generation and seeded constructors");
    params.add("threads", common.threads, "Worker threads");
    params.add("out-dir", common.out_dir, "Output directory");
  }
  virtual ~Command() = default;

  void execute() {
    if (!common.config.empty()) params.merge(read_json(common.config));
    if (common.threads == 0) throw InvalidInput("threads must be >= 1");
    json resolved = params.resolved();
    resolved["command"] = app->get_name();
    write_json(common, app->get_name() + "_config.json", resolved);
    run();
  }
  virtual void run() = 0;

  CLI::App* app;
  Params params;
  Common common;
};

struct GraphSpec {
  std::string file;
  std::size_t n = 20;
  std::size_t r = 3;
  bool tree = false;
  std::size_t branching = 2;

  void add(Params& p) {
    p.add("graph", file, "Graph JSON file; otherwise a graph is generated");
    p.add("n", n, "Number of vertices");
    p.add("r", r, "Degree of the random regular graph");
    p.flag("tree", tree, "Generate a complete tree instead");
    p.add("branching", branching, "Tree branching factor");
  }

  Graph build(std::uint64_t seed) const {
    if (!file.empty()) return load_graph(file);
    if (tree) return build_tree(n, branching);
    return random_regular(n, r, seed);
  }
};

struct BpSpec {
  int max_steps = 100;
  double tol = 1e-8;
  double damping = 0.0;
  std::string msg_init = "identity";
  std::uint64_t msg_seed = 7;

  void add(Params& p) {
    p.add("max-steps", max_steps, "BP step limit");
    p.add("tol", tol, "BP convergence threshold on edge RDM trace distance");
    p.add("damping", damping, "Message damping in [0, 1)");
    p.add("msg-init", msg_init, "Message initialization: identity or random");
    p.add("msg-seed", msg_seed, "Seed for random message initialization");
  }

  BpConfig config(std::size_t threads) const {
    BpConfig cfg;
    cfg.max_steps = max_steps;
    cfg.rdm_tolerance = tol;
    cfg.damping = damping;
    cfg.threads = threads;
    if (msg_init == "random") {
      cfg.init = MessageInit::random(msg_seed);
    } else if (msg_init != "identity") {
      throw InvalidInput("msg-init must be identity or random");
    }
    cfg.validate();
    return cfg;
  }
};

struct ModelSpec {
  std::string model = "mixed_field_ising";
  double jzz = -1.0;
  double hx = -2.0;
  double hz = -0.5;

  void add(Params& p) {
    p.add("model", model, "mixed_field_ising (H = sum jzz ZZ + sum (hx X + hz Z)) or tfim (H = -sum ZZ - hx sum X)");
    p.add("jzz", jzz, "ZZ coupling (mixed_field_ising)");
    p.add("hx", hx, "Transverse field");
    p.add("hz", hz, "Longitudinal field (mixed_field_ising)");
  }

  Hamiltonian build(const Graph& g) const {
    if (model == "mixed_field_ising") return mixed_field_ising(g, jzz, hx, hz);
    if (model == "tfim") return transverse_field_ising(g, hx);
    throw InvalidInput("unknown model '" + model + "'");
  }
};

struct VarSpec {
  int t_var = 40;
  int t_bp = 5;
  int n_gd = 10;
  double gamma = 0.01;
  std::size_t chi = 2;
  std::string init = "product";
  double init_angle = std::numbers::pi / 4;
  double init_beta = 0.0;
  double init_j = 1.0;
  std::uint64_t init_seed = 0;
  double noise = 1e-2;
  std::uint64_t noise_seed = 1;
  bool no_descent_check = false;
  BpSpec final_bp;

  void add(Params& p) {
    p.add("t-var", t_var, "Outer iterations");
    p.add("t-bp", t_bp, "BP steps per outer iteration");
    p.add("n-gd", n_gd, "Gradient steps per outer iteration");
    p.add("gamma", gamma, "Gradient step size");
    p.add("chi", chi, "Bond dimension");
    p.add("init", init, "Initial state: product, sqrt or random");
    p.add("init-angle", init_angle, "Product init local vector (cos a, sin a)");
    p.add("init-beta", init_beta, "Square-root init inverse temperature");
    p.add("init-j", init_j, "Square-root init coupling");
    p.add("init-seed", init_seed, "Random init seed");
    p.add("noise", noise, "Gaussian noise amplitude added to the initial tensors");
    p.add("noise-seed", noise_seed, "Noise seed");
    p.flag("no-descent-check", no_descent_check, "Do not abort when the frozen-message energy rises");
    final_bp.add(p);
  }

  VarConfig config(std::size_t threads) const {
    VarConfig cfg;
    cfg.t_var = t_var;
    cfg.t_bp = t_bp;
    cfg.n_gd = n_gd;
    cfg.gamma = gamma;
    cfg.chi = chi;
    if (init == "product") {
      cfg.init.kind = VarInit::Kind::Product;
      cfg.init.local = Vector(2);
      cfg.init.local << std::cos(init_angle), std::sin(init_angle);
    } else if (init == "sqrt") {
      cfg.init.kind = VarInit::Kind::SqrtState;
      cfg.init.beta = init_beta;
      cfg.init.j = init_j;
    } else if (init == "random") {
      cfg.init.kind = VarInit::Kind::Random;
      cfg.init.seed = init_seed;
    } else {
      throw InvalidInput("init must be product, sqrt or random");
    }
    cfg.noise = noise;
    cfg.noise_seed = noise_seed;
    cfg.check_descent = !no_descent_check;
    cfg.final_bp = final_bp.config(threads);
    cfg.threads = threads;
    cfg.validate();
    return cfg;
  }
};

// <v|op_a|v> averaged over sites, for a single-site operator.
double ed_site_average(const Vector& v, const Matrix& op, std::size_t n) {
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    Vector out = Vector::Zero(v.size());
    apply_local(op, {a}, n, 2, v, out);
    sum += v.dot(out).real();
  }
  return sum / static_cast<double>(n);
}

double ed_edge_average(const Vector& v, const Matrix& op, const Graph& g) {
  double sum = 0.0;
  for (const auto& e : g.edges()) {
    Vector out = Vector::Zero(v.size());
    apply_local(op, {e.a, e.b}, g.num_vertices(), 2, v, out);
    sum += v.dot(out).real();
  }
  return g.num_edges() == 0 ? 0.0 : sum / static_cast<double>(g.num_edges());
}

struct GraphGen : Command {
  GraphSpec graph;
  std::string out = "graph.json";
  std::size_t max_cycle = 8;

  explicit GraphGen(CLI::App* sub) : Command(sub) {
    graph.add(params);
    params.add("out", out, "Graph JSON file name inside out-dir");
    params.add("max-cycle", max_cycle, "Longest cycle length counted in the diagnostics");
  }

  void run() override {
    if (!graph.file.empty()) throw InvalidInput("graph-gen builds a graph; --graph is not accepted");
    const Graph g = graph.build(common.seed);
    write_json(common, out, to_json(g));
    const GraphDiagnostics d = diagnose(g, max_cycle);
    auto csv = open_output(common, "graph_diagnostics.csv");
    csv << "quantity,value\n";
    csv << "vertices," << g.num_vertices() << "\nedges," << g.num_edges() << "\n";
    csv << "tree," << (d.tree ? 1 : 0) << "\n";
    for (auto [deg, count] : d.degree_histogram) csv << "degree_" << deg << "," << count << "\n";
    for (auto [len, count] : d.cycle_counts) csv << "cycles_" << len << "," << count << "\n";
    if (d.expansion) csv << "expansion," << d.expansion->value() << "\n";
    if (d.diameter) csv << "diameter," << *d.diameter << "\n";
    std::cout << "graph: " << g.num_vertices() << " vertices, " << g.num_edges() << " edges"
              << (d.tree ? ", tree" : "") << "\n";
  }
};

struct BpRun : Command {
  GraphSpec graph;
  BpSpec bp;
  std::string state = "graph";
  std::string state_file;
  double beta = 0.5;
  double j = 1.0;
  std::size_t chi = 2;

  explicit BpRun(CLI::App* sub) : Command(sub) {
    graph.add(params);
    bp.add(params);
    params.add("state", state, "graph, sqrt, random or plus");
    params.add("state-file", state_file, "State JSON file; overrides --state and the graph options");
    params.add("beta", beta, "Square-root state inverse temperature");
    params.add("j", j, "Square-root state coupling");
    params.add("chi", chi, "Random state bond dimension");
  }

  TensorNetworkState build_state() const {
    if (!state_file.empty()) return state_from_json(read_json(state_file));
    const Graph g = graph.build(common.seed);
    if (state == "graph") return graph_state(g);
    if (state == "sqrt") return square_root_state(g, beta, j);
    if (state == "random") return random_state(g, chi, derive_seed(common.seed, 1));
    if (state == "plus") return product_state(g, Vector::Constant(2, 1.0));
    throw InvalidInput("unknown state '" + state + "'");
  }

  void run() override {
    const TensorNetworkState s = build_state();
    const BpResult res = run_bp(s, bp.config(common.threads));
    open_output(common, "bp_diagnostics.csv") << diagnostics_csv(res.diagnostics);
    write_json(common, "messages.json", to_json(res.messages, s.graph()));
    const Graph& g = s.graph();
    if (s.phys_dim() == 2) {
      auto sites = open_output(common, "bp_sites.csv");
      sites << "site,z,x,y\n";
      for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const Rdm rho = rdm(s, res.messages, {v});
        sites << v << ',' << expectation(rho, pauli::Z()) << ',' << expectation(rho, pauli::X()) << ','
              << expectation(rho, pauli::Y()) << '\n';
      }
      auto edges = open_output(common, "bp_edges.csv");
      edges << "a,b,zz,entropy\n";
      const auto rhos = edge_rdms(s, res.messages);
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        edges << g.edges()[e].a << ',' << g.edges()[e].b << ','
              << expectation(rhos[e], kron(pauli::Z(), pauli::Z())) << ',' << entanglement_entropy(rhos[e]) << '\n';
      }
    }
    std::cout << "bp: " << res.diagnostics.steps_run << " steps, converged=" << res.diagnostics.converged << "\n";
  }
};

struct SqrtSweep : Command {
  GraphSpec graph;
  BpSpec bp;
  std::vector<double> betas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
  double j = 1.0;
  std::uint64_t mc_sweeps = 21000;
  std::uint64_t mc_burn_in = 1000;
  std::size_t mc_batches = 50;
  std::uint64_t mc_seed = 1;
  bool mc_random_start = false;
  bool no_mc = false;

  explicit SqrtSweep(CLI::App* sub) : Command(sub) {
    graph.add(params);
    bp.msg_init = "random";
    bp.add(params);
    params.add("betas", betas, "Inverse temperatures");
    params.add("j", j, "Ising coupling");
    params.add("mc-sweeps", mc_sweeps, "Monte Carlo sweeps including burn-in");
    params.add("mc-burn-in", mc_burn_in, "Monte Carlo burn-in sweeps");
    params.add("mc-batches", mc_batches, "Batches for the batch-means error");
    params.add("mc-seed", mc_seed, "Monte Carlo seed; point k uses derive_seed(mc-seed, k)");
    params.flag("mc-random-start", mc_random_start, "Start chains from random spins instead of all +1");
    params.flag("no-mc", no_mc, "Skip Monte Carlo columns");
  }

  void run() override {
    const Graph g = graph.build(common.seed);
    const std::size_t n = g.num_vertices();
    const BpConfig bpcfg = bp.config(common.threads);
    const bool exact = n <= 16;
    auto csv = open_output(common, "sqrt_sweep.csv");
    csv << "beta,bp_mean_abs_z,mc_mean_abs_z,mc_err,bp_mean_x,bp_edge_entropy,bp_converged,bp_steps";
    if (exact) csv << ",exact_mean_abs_z,exact_mean_x,max_dev_z,max_dev_x";
    csv << '\n';
    json report = json::array();
    for (std::size_t k = 0; k < betas.size(); ++k) {
      const double beta = betas[k];
      const TensorNetworkState s = square_root_state(g, beta, j);
      const BpResult res = run_bp(s, bpcfg);
      const SiteAverages obs = site_averaged_observables(s, res.messages);
      double mc_mean = std::nan(""), mc_err = std::nan("");
      if (!no_mc) {
        McConfig mc;
        mc.sweeps = mc_sweeps;
        mc.burn_in = mc_burn_in;
        mc.batches = mc_batches;
        mc.seed = derive_seed(mc_seed, k);
        mc.cold_start = !mc_random_start;
        const McResult r = classical_ising_mc(g, beta, j, mc);
        mc_mean = r.mean_abs_magnetization;
        mc_err = r.mean_abs_magnetization_se;
      }
      csv << beta << ',' << obs.mean_abs_z << ',' << mc_mean << ',' << mc_err << ',' << obs.mean_x << ','
          << obs.edge_entropy << ',' << (res.diagnostics.converged ? 1 : 0) << ',' << res.diagnostics.steps_run;
      if (exact) {
        const ClassicalExact ex = classical_exact_expectations(g, beta, j);
        double abs_z = 0.0, mean_x = 0.0, dev_z = 0.0, dev_x = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          const Rdm rho = rdm(s, res.messages, {a});
          abs_z += std::abs(ex.z[a]) / static_cast<double>(n);
          mean_x += ex.x[a] / static_cast<double>(n);
          dev_z = std::max(dev_z, std::abs(expectation(rho, pauli::Z()) - ex.z[a]));
          dev_x = std::max(dev_x, std::abs(expectation(rho, pauli::X()) - ex.x[a]));
        }
        csv << ',' << abs_z << ',' << mean_x << ',' << dev_z << ',' << dev_x;
        report.push_back({{"beta", beta}, {"max_dev_z", dev_z}, {"max_dev_x", dev_x}});
        std::cout << "beta " << beta << ": max |dZ| " << dev_z << ", max |dX| " << dev_x << "\n";
      }
      csv << '\n';
    }
    if (exact) write_json(common, "sqrt_sweep_deviation.json", report);
  }
};

struct GraphStateCheck : Command {
  GraphSpec graph;
  int steps = 10;
  double damping = 0.0;

  explicit GraphStateCheck(CLI::App* sub) : Command(sub) {
    graph.n = 50;
    graph.add(params);
    params.add("steps", steps, "BP steps to record");
    params.add("damping", damping, "Message damping in [0, 1)");
  }

  void run() override {
    if (steps < 0) throw InvalidInput("steps must be >= 0");
    const TensorNetworkState s = graph_state(graph.build(common.seed));
    MessageSet msgs = init_messages(s, MessageInit::identity());
    auto csv = open_output(common, "graphstate_check.csv");
    csv << "step,mean_x,mean_y,mean_z,edge_entropy,max_rdm_trace_distance\n";
    std::vector<Rdm> prev = edge_rdms(s, msgs);
    for (int step = 0; step <= steps; ++step) {
      double dist = 0.0;
      if (step > 0) {
        msgs = bp_step(s, msgs, damping, common.threads);
        const std::vector<Rdm> now = edge_rdms(s, msgs);
        for (std::size_t e = 0; e < now.size(); ++e) dist = std::max(dist, rdm_trace_distance(prev[e], now[e]));
        prev = now;
      }
      const SiteAverages obs = site_averaged_observables(s, msgs);
      csv << step << ',' << obs.mean_x << ',' << obs.mean_y << ',' << obs.mean_z << ',' << obs.edge_entropy << ','
          << dist << '\n';
    }
  }
};

void write_trace_rows(std::ostream& csv, const VarTrace& tr, std::size_t n, const std::string& prefix,
                      const std::string& suffix) {
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < tr.iterations.size(); ++k) {
    const VarIteration& it = tr.iterations[k];
    csv << prefix << k + 1 << ',' << it.energy << ',' << it.energy * inv_n << ',' << it.mean_abs_z << ','
        << it.mean_x << ',' << it.mean_zz << suffix << '\n';
  }
  const SiteAverages& f = tr.final_observables;
  csv << prefix << "final," << tr.final_energy << ',' << tr.final_energy * inv_n << ',' << f.mean_abs_z << ','
      << f.mean_x << ',' << f.mean_zz << suffix << '\n';
}

struct VarPrep : Command {
  GraphSpec graph;
  ModelSpec model;
  VarSpec var;
  bool oracle = false;
  bool save_state = false;

  explicit VarPrep(CLI::App* sub) : Command(sub) {
    graph.n = 10;
    graph.add(params);
    model.add(params);
    var.add(params);
    params.flag("oracle", oracle, "Compare with exact diagonalization (N <= 14)");
    params.flag("save-state", save_state, "Write the final state JSON");
  }

  void run() override {
    const Graph g = graph.build(common.seed);
    const std::size_t n = g.num_vertices();
    const Hamiltonian h = model.build(g);
    const VarConfig cfg = var.config(common.threads);
    if (oracle && n > 14) throw InvalidInput("--oracle needs N <= 14");
    const VarTrace tr = variational_prepare(g, h, cfg);
    json summary = {{"final_energy", tr.final_energy},
                    {"final_bp_converged", tr.final_bp_converged},
                    {"energy_converged", tr.energy_converged}};
    auto csv = open_output(common, "var_trace.csv");
    csv << "iteration,energy,energy_density,mean_abs_z,mean_x,mean_zz";
    std::string suffix;
    if (oracle) {
      const EdResult ed = exact_diagonalize(h);
      csv << ",ed_e0,rel_error";
      std::ostringstream s;
      s.precision(std::numeric_limits<double>::max_digits10);
      s << ',' << ed.e0;
      summary["ed_e0"] = ed.e0;
      summary["ed_e1"] = ed.e1;
      summary["rel_error"] = std::abs(tr.final_energy - ed.e0) / std::abs(ed.e0);
      summary["ground_space_overlap"] = ground_space_overlap(tr.state, ed);
      summary["fidelity_v0"] = fidelity(tr.state, ed.v0);
      csv << '\n';
      const double inv = 1.0 / std::abs(ed.e0);
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t k = 0; k < tr.iterations.size(); ++k) {
        const VarIteration& it = tr.iterations[k];
        csv << k + 1 << ',' << it.energy << ',' << it.energy * inv_n << ',' << it.mean_abs_z << ',' << it.mean_x
            << ',' << it.mean_zz << s.str() << ',' << std::abs(it.energy - ed.e0) * inv << '\n';
      }
      const SiteAverages& f = tr.final_observables;
      csv << "final," << tr.final_energy << ',' << tr.final_energy * inv_n << ',' << f.mean_abs_z << ','
          << f.mean_x << ',' << f.mean_zz << s.str() << ',' << std::abs(tr.final_energy - ed.e0) * inv << '\n';
      std::cout << "E = " << tr.final_energy << ", ED E0 = " << ed.e0
                << ", ground-space overlap = " << summary["ground_space_overlap"].get<double>() << "\n";
    } else {
      csv << '\n';
      write_trace_rows(csv, tr, n, "", "");
      std::cout << "E = " << tr.final_energy << "\n";
    }
    write_json(common, "var_summary.json", summary);
    if (save_state) write_json(common, "state.json", to_json(tr.state));
  }
};

struct TfimSweep : Command {
  GraphSpec graph;
  VarSpec var;
  std::vector<double> hx{0.5, 1.0, 1.5, 2.0, 2.25, 2.5, 2.75, 3.0, 3.5, 4.0};
  int restarts = 3;
  bool no_ed = false;
  bool save_states = false;

  explicit TfimSweep(CLI::App* sub) : Command(sub) {
    graph.n = 10;
    var.t_var = 100;
    var.init_angle = std::numbers::pi / 8;
    graph.add(params);
    var.add(params);
    params.add("hx", hx, "Transverse fields");
    params.add("restarts", restarts, "Restarts per field; restart r uses noise seed derive_seed(noise-seed, r)");
    params.flag("no-ed", no_ed, "Skip exact-diagonalization columns");
    params.flag("save-states", save_states, "Write every final state JSON");
  }

  void run() override {
    const Graph g = graph.build(common.seed);
    const std::size_t n = g.num_vertices();
    const VarConfig cfg = var.config(1);
    const auto points = tfim_sweep(g, hx, cfg, restarts, common.threads);
    auto csv = open_output(common, "tfim_sweep.csv");
    csv << "hx,restart,iteration,energy,energy_density,mean_abs_z,mean_x,mean_zz,converged\n";
    for (const SweepPoint& p : points) {
      std::ostringstream prefix;
      prefix.precision(std::numeric_limits<double>::max_digits10);
      prefix << p.hx << ',' << p.restart << ',';
      const std::string flag = (p.trace.final_bp_converged && p.trace.energy_converged) ? ",1" : ",0";
      write_trace_rows(csv, p.trace, n, prefix.str(), flag);
      if (save_states) {
        std::ostringstream name;
        name << "state_hx" << p.hx << "_r" << p.restart << ".json";
        write_json(common, name.str(), to_json(p.trace.state));
      }
    }
    const bool ed = !no_ed && n <= 14;
    auto sum = open_output(common, "tfim_summary.csv");
    sum << "hx,mean_abs_z,abs_z_spread,mean_x,mean_zz,energy_density";
    if (ed) sum << ",ed_energy_density,ed_mean_x,ed_mean_zz";
    sum << '\n';
    for (const SweepSummary& s : summarize_sweep(points, n)) {
      sum << s.hx << ',' << s.mean_abs_z << ',' << s.abs_z_spread << ',' << s.mean_x << ',' << s.mean_zz << ','
          << s.energy_density;
      if (ed) {
        const EdResult r = exact_diagonalize(transverse_field_ising(g, s.hx));
        sum << ',' << r.e0 / static_cast<double>(n) << ',' << ed_site_average(r.v0, pauli::X(), n) << ','
            << ed_edge_average(r.v0, kron(pauli::Z(), pauli::Z()), g);
      }
      sum << '\n';
      std::cout << "hx " << s.hx << ": mean|Z| " << s.mean_abs_z << " (spread " << s.abs_z_spread << "), E/N "
                << s.energy_density << "\n";
    }
  }
};

std::vector<std::unique_ptr<Command>>& registry() {
  static std::vector<std::unique_ptr<Command>> commands;
  return commands;
}

template <class C>
void add_command(CLI::App& app, const std::string& name, const std::string& help) {
  CLI::App* sub = app.add_subcommand(name, help);
  registry().push_back(std::make_unique<C>(sub));
  Command* cmd = registry().back().get();
  sub->callback([cmd] { cmd->execute(); });
}

}  // namespace

void register_commands(CLI::App& app) {
  add_command<GraphGen>(app, "graph-gen", "Generate a graph and its diagnostics");
  add_command<BpRun>(app, "bp-run", "Run BP on a state and export messages and observables");
  add_command<SqrtSweep>(app, "sqrt-sweep", "Square-root state observables vs beta, with MC and enumeration");
  add_command<GraphStateCheck>(app, "graphstate-check", "Graph-state observables vs BP step");
  add_command<VarPrep>(app, "var-prep", "Variational ground-state preparation");
  add_command<TfimSweep>(app, "tfim-sweep", "Transverse-field Ising phase diagram sweep");
  app.require_subcommand(1);
}

}  // namespace bptn::cli
