#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dcat/config.hpp"
#include "dcat/inner.hpp"
#include "dcat/network.hpp"
#include "dcat/outer.hpp"
#include "dcat/problems.hpp"

namespace dcat {

struct Experiment {
  CompositeProblem problem;
  Topology topology;
  Gossip gossip;
  std::unique_ptr<InnerAlgorithm> inner;
  OuterSchedule schedule;
  std::vector<std::string> notes;
};

CompositeProblem build_problem(const ExperimentConfig& cfg);
Graph build_graph(const ExperimentConfig& cfg);
// Gossip operator for the inner algorithm; Chebyshev mixing meets rho_target
// (or the SONATA bound on the subproblem when rho_target < 0).
Gossip build_gossip(const ExperimentConfig& cfg, const Topology& topo, const ProblemConstants& base,
                    double delta);
std::unique_ptr<InnerAlgorithm> build_inner(const ExperimentConfig& cfg, const Topology& topo,
                                            const Gossip& gossip);
BudgetPolicy parse_budget(const std::string& s);
Experiment build_experiment(const ExperimentConfig& cfg);

struct ExperimentResult {
  RunTrace trace;
  RunTrace baseline;
  bool has_baseline = false;
  Reference reference;
  std::string csv;
  std::string baseline_csv;
  std::string summary;  // JSON
};

std::string trace_csv(const RunTrace& tr);
// First row whose gap is <= target: (communications, gradients), or -1.
std::pair<long long, long long> cost_to_target(const RunTrace& tr, double target);

ExperimentResult run_experiment(const ExperimentConfig& cfg, double oracle_tol = 1e-12);

// Writes csv (and the baseline next to it) plus the summary; returns the paths written.
std::vector<std::string> write_result(const ExperimentConfig& cfg, const ExperimentResult& r);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace dcat
