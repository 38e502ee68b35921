#include "dcat/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "dcat/libsvm.hpp"
#include "dcat/oracle.hpp"
#include "dcat/synth.hpp"

namespace dcat {

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

CompositeProblem build_problem(const ExperimentConfig& cfg) {
  if (cfg.kind == "similarity") {
    SimilaritySpec s;
    s.m = cfg.m;
    s.d = cfg.dim;
    s.mu = cfg.sim_mu;
    s.L = cfg.sim_L;
    s.beta = cfg.sim_beta;
    s.seed = cfg.seed;
    return CompositeProblem(synth_similarity_agents(s), Regularizer::zero());
  }
  Dataset ds = cfg.source == "synth"
                   ? synth_classification(cfg.samples, cfg.dim, cfg.decay, cfg.flip, cfg.seed)
                   : parse_libsvm(cfg.source);
  if (ds.size() < cfg.m) throw std::runtime_error("dataset has fewer rows than agents");
  const Regularizer reg = cfg.l1 > 0.0 ? Regularizer::l1(cfg.l1) : Regularizer::zero();
  const std::uint64_t pseed = splitmix64(cfg.seed ^ 0x5eedULL);
  if (cfg.kind == "logistic") {
    double gamma = cfg.gamma;
    if (gamma < 0.0) {
      if (!(cfg.kappa > 1.0)) throw std::runtime_error("problem.kappa must exceed 1");
      gamma = logistic_data_L(ds, cfg.m, pseed) / (cfg.kappa - 1.0);
    }
    return CompositeProblem(logistic_agents(ds, cfg.m, gamma, pseed), reg);
  }
  if (cfg.kind != "linreg" && cfg.kind != "huber")
    throw std::runtime_error("unknown problem.kind " + cfg.kind);
  auto shards = partition(ds.size(), cfg.m, pseed);
  auto make = [&](double gamma) {
    std::vector<AgentLoss> agents;
    for (const auto& sh : shards) {
      if (cfg.kind == "linreg")
        agents.push_back(AgentLoss::linreg(ds.dense(sh), ds.label_vec(sh), gamma));
      else
        agents.push_back(AgentLoss::huber(ds.dense(sh), ds.label_vec(sh), gamma, cfg.huber_lambda));
    }
    return agents;
  };
  double gamma = cfg.gamma;
  if (gamma < 0.0) {
    if (!(cfg.kappa > 1.0)) throw std::runtime_error("problem.kappa must exceed 1");
    // data curvature = L at unit ridge weight minus one
    const double data_L = CompositeProblem(make(1.0), Regularizer::zero()).constants().L - 1.0;
    gamma = data_L / (cfg.kappa - 1.0);
  }
  return CompositeProblem(make(gamma), reg);
}

Graph build_graph(const ExperimentConfig& cfg) {
  if (cfg.graph == "er") return erdos_renyi(cfg.m, cfg.p, splitmix64(cfg.seed + 17));
  if (cfg.graph == "path") return path_graph(cfg.m);
  if (cfg.graph == "ring") return ring_graph(cfg.m);
  if (cfg.graph == "complete") return complete_graph(cfg.m);
  throw std::runtime_error("unknown topology.graph " + cfg.graph);
}

Gossip build_gossip(const ExperimentConfig& cfg, const Topology& topo, const ProblemConstants& base,
                    double delta) {
  if (cfg.mixing == "plain") return plain_gossip(topo);
  if (cfg.mixing != "chebyshev") throw std::runtime_error("unknown topology.mixing " + cfg.mixing);
  double target = cfg.rho_target;
  if (target < 0.0) {
    if (cfg.inner == "sonata-l" || cfg.inner == "sonata-f") {
      const SonataVariant v = cfg.inner == "sonata-l" ? SonataVariant::L : SonataVariant::F;
      target = sonata_rho_bound(v, base.shifted(delta));
    } else {
      return plain_gossip(topo);
    }
  }
  return chebyshev_gossip(topo, chebyshev_rounds_for(topo.rho, target));
}

std::unique_ptr<InnerAlgorithm> build_inner(const ExperimentConfig& cfg, const Topology& topo,
                                            const Gossip& gossip) {
  if (cfg.inner == "sonata-l") return std::make_unique<SonataInner>(SonataVariant::L, gossip);
  if (cfg.inner == "sonata-f") return std::make_unique<SonataInner>(SonataVariant::F, gossip);
  if (cfg.inner == "puda") return std::make_unique<PudaInner>(prox_ed_triple(gossip.P, gossip.rounds));
  if (cfg.inner == "pmgt")
    return std::make_unique<PmgtInner>(topo, splitmix64(cfg.seed + 101), cfg.n_fm);
  throw std::runtime_error("unknown algorithm.inner " + cfg.inner);
}

BudgetPolicy parse_budget(const std::string& s) {
  if (s == "practical-scvx") return BudgetPolicy::practical_scvx;
  if (s == "practical-cvx") return BudgetPolicy::practical_cvx;
  if (s == "practical-vr") return BudgetPolicy::practical_vr;
  if (s == "fixed") return BudgetPolicy::fixed;
  if (s == "theory-scvx") return BudgetPolicy::theory_scvx;
  if (s == "theory-cvx") return BudgetPolicy::theory_cvx;
  throw std::runtime_error("unknown algorithm.budget " + s);
}

Experiment build_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.problem = build_problem(cfg);
  e.topology = make_topology(build_graph(cfg));
  const ProblemConstants& base = e.problem.constants();

  double delta = cfg.delta;
  if (delta < 0.0) {
    // the policy is a property of the inner method; PUDA's needs its matrices
    std::unique_ptr<InnerAlgorithm> probe = build_inner(cfg, e.topology, plain_gossip(e.topology));
    try {
      delta = probe->delta_policy(base);
    } catch (const std::domain_error& ex) {
      e.notes.push_back(std::string("delta policy: ") + ex.what());
      delta = 0.0;
    }
  }
  e.gossip = build_gossip(cfg, e.topology, base, delta);
  e.inner = build_inner(cfg, e.topology, e.gossip);
  e.schedule.delta = delta;
  e.schedule.alpha_mode = cfg.alpha == "cvx" ? AlphaMode::cvx : AlphaMode::scvx;
  if (cfg.alpha != "cvx" && cfg.alpha != "scvx") throw std::runtime_error("unknown algorithm.alpha " + cfg.alpha);
  e.schedule.budget = parse_budget(cfg.budget);
  e.schedule.fixed_T = cfg.T;
  e.schedule.c = cfg.c;
  e.schedule.r0 = cfg.r0;
  return e;
}

namespace {

void append_num(std::string& out, double v) {
  char buf[40];
  int n = std::isnan(v) ? std::snprintf(buf, sizeof buf, "nan") : std::snprintf(buf, sizeof buf, "%.12e", v);
  out.append(buf, n);
}

}  // namespace

std::string trace_csv(const RunTrace& tr) {
  std::string out =
      "outer_k,inner_t,comm_rounds_cum,grad_components_cum,prox_cum,gap,consensus_err,merit,wallclock_ms\n";
  for (const TraceRow& r : tr.rows) {
    out += std::to_string(r.outer_k) + "," + std::to_string(r.inner_t) + "," +
           std::to_string(r.cum.comm) + "," + std::to_string(r.cum.grads) + "," +
           std::to_string(r.cum.prox) + ",";
    append_num(out, r.gap);
    out += ",";
    append_num(out, r.consensus);
    out += ",";
    append_num(out, r.merit);
    out += ",";
    append_num(out, r.wallclock_ms);
    out += "\n";
  }
  return out;
}

std::pair<long long, long long> cost_to_target(const RunTrace& tr, double target) {
  for (const TraceRow& r : tr.rows)
    if (r.gap <= target) return {r.cum.comm, r.cum.grads};
  return {-1, -1};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, double oracle_tol) {
  Experiment e = build_experiment(cfg);
  ExperimentResult res;
  ReferenceSolution rs = fista_solve(e.problem, oracle_tol, 500000);
  if (!rs.converged) {
    std::ostringstream os;
    os << "oracle failed: residual " << rs.residual << " after " << rs.iterations << " iterations";
    throw std::runtime_error(os.str());
  }
  res.reference = rs.ref();
  RunOptions opt;
  opt.reference = res.reference;
  opt.gap_kind = e.schedule.alpha_mode == AlphaMode::scvx ? GapKind::dist : GapKind::value;
  opt.deterministic_clock = cfg.deterministic_clock;
  opt.stop_gap = cfg.stop_gap;
  const Mat x0 = Mat::Zero(e.problem.m(), e.problem.d());
  res.trace = run_dcatalyst(e.problem, *e.inner, e.schedule, cfg.K, x0, opt);
  res.csv = trace_csv(res.trace);
  if (cfg.baseline_steps > 0) {
    ExperimentConfig bc = cfg;
    Gossip g = build_gossip(bc, e.topology, e.problem.constants(), 0.0);
    auto plain = build_inner(bc, e.topology, g);
    res.baseline = run_plain(e.problem, *plain, cfg.baseline_steps, x0, opt);
    res.baseline_csv = trace_csv(res.baseline);
    res.has_baseline = true;
  }

  nlohmann::ordered_json j;
  const ProblemConstants& k = e.problem.constants();
  j["inner"] = cfg.inner;
  j["m"] = e.problem.m();
  j["d"] = e.problem.d();
  j["delta"] = e.schedule.delta;
  j["L"] = k.L;
  j["mu"] = k.mu;
  j["beta"] = k.beta;
  j["rho"] = e.topology.rho;
  j["gossip_rounds"] = e.gossip.rounds;
  j["u_star"] = res.reference.u;
  j["outer_loops"] = static_cast<int>(res.trace.T.size());
  j["T"] = res.trace.T;
  j["notes"] = e.notes;
  auto targets = [&](const RunTrace& tr) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int p = 2; p <= 8; ++p) {
      const double t = std::pow(10.0, -p);
      auto [c, g] = cost_to_target(tr, t);
      arr.push_back({{"target", t}, {"comm", c}, {"grads", g}});
    }
    return arr;
  };
  j["to_target"] = targets(res.trace);
  if (res.has_baseline) j["baseline_to_target"] = targets(res.baseline);
  if (cfg.moreau && e.schedule.delta > 0.0) {
    MoreauOracle M(e.problem, e.schedule.delta);
    std::vector<double> metric;
    for (const Mat& X : res.trace.X) {
      double s = 0.0;
      for (int i = 0; i < X.rows(); ++i) s += M.grad(X.row(i).transpose()).squaredNorm();
      metric.push_back(s / (2.0 * e.schedule.delta * X.rows()));
    }
    j["moreau_metric"] = metric;
  }
  res.summary = j.dump(2) + "\n";
  return res;
}

std::vector<std::string> write_result(const ExperimentConfig& cfg, const ExperimentResult& r) {
  std::vector<std::string> paths;
  write_text(cfg.csv, r.csv);
  paths.push_back(cfg.csv);
  std::string stem = cfg.csv;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
  if (r.has_baseline) {
    write_text(stem + ".baseline.csv", r.baseline_csv);
    paths.push_back(stem + ".baseline.csv");
  }
  const std::string sp = cfg.summary.empty() ? stem + ".json" : cfg.summary;
  write_text(sp, r.summary);
  paths.push_back(sp);
  return paths;
}

}  // namespace dcat
