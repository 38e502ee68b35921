#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace dcat {

// Flat "key = value" text with [section] headers; keys are stored as
// "section.key". '#' and ';' start comments.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string str(const std::string& key, const std::string& def) const;
  double num(const std::string& key, double def) const;
  long long integer(const std::string& key, long long def) const;
  bool flag(const std::string& key, bool def) const;
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

struct ExperimentConfig {
  // [problem]
  std::string kind = "logistic";  // logistic | linreg | huber | similarity
  std::string source = "synth";   // synth | path to a LIBSVM file
  int samples = 600;
  int dim = 10;
  double decay = 10.0;
  double flip = 0.05;
  double gamma = -1.0;     // < 0: derived from kappa
  double kappa = 20.0;
  double l1 = 0.0;
  double huber_lambda = 0.1;
  double sim_mu = 1.0;
  double sim_L = 20.0;
  double sim_beta = 4.0;
  // [topology]
  std::string graph = "er";  // er | path | ring | complete
  int m = 10;
  double p = 0.5;
  std::string mixing = "plain";  // plain | chebyshev
  double rho_target = -1.0;      // < 0: the inner algorithm's own bound
  // [algorithm]
  std::string inner = "sonata-l";  // sonata-l | sonata-f | puda | pmgt
  double delta = -1.0;             // < 0: the inner algorithm's policy
  std::string alpha = "scvx";      // scvx | cvx
  std::string budget = "practical-scvx";
  int T = 1;
  int K = 30;
  double c = 0.9;
  double r0 = 0.1;
  int n_fm = -1;
  int baseline_steps = 0;
  double stop_gap = 0.0;
  // [output]
  std::string csv = "trace.csv";
  std::string summary;  // empty: csv path with .json
  bool deterministic_clock = true;
  bool moreau = false;  // log the Moreau stationarity metric per outer loop
  // top level
  std::uint64_t seed = 1;

  static ExperimentConfig from(const KeyValueConfig& kv);
};

}  // namespace dcat
