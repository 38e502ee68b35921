#include "dcat/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcat {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig c;
  std::istringstream in(text);
  std::string line, section;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::runtime_error("config line " + std::to_string(ln) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(ln) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::runtime_error("config line " + std::to_string(ln) + ": empty key");
    c.kv_[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
  }
  return c;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string KeyValueConfig::str(const std::string& key, const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

double KeyValueConfig::num(const std::string& key, double def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != it->second.size()) throw std::runtime_error("config: " + key + " is not a number");
  return v;
}

long long KeyValueConfig::integer(const std::string& key, long long def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(it->second, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != it->second.size()) throw std::runtime_error("config: " + key + " is not an integer");
  return v;
}

bool KeyValueConfig::flag(const std::string& key, bool def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: " + key + " is not a boolean");
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv) {
  ExperimentConfig c;
  c.kind = kv.str("problem.kind", c.kind);
  c.source = kv.str("problem.source", c.source);
  c.samples = static_cast<int>(kv.integer("problem.samples", c.samples));
  c.dim = static_cast<int>(kv.integer("problem.dim", c.dim));
  c.decay = kv.num("problem.decay", c.decay);
  c.flip = kv.num("problem.flip", c.flip);
  c.gamma = kv.num("problem.gamma", c.gamma);
  c.kappa = kv.num("problem.kappa", c.kappa);
  c.l1 = kv.num("problem.l1", c.l1);
  c.huber_lambda = kv.num("problem.huber_lambda", c.huber_lambda);
  c.sim_mu = kv.num("problem.mu", c.sim_mu);
  c.sim_L = kv.num("problem.L", c.sim_L);
  c.sim_beta = kv.num("problem.beta", c.sim_beta);

  c.graph = kv.str("topology.graph", c.graph);
  c.m = static_cast<int>(kv.integer("topology.m", c.m));
  c.p = kv.num("topology.p", c.p);
  c.mixing = kv.str("topology.mixing", c.mixing);
  c.rho_target = kv.num("topology.rho_target", c.rho_target);

  c.inner = kv.str("algorithm.inner", c.inner);
  if (kv.str("algorithm.delta", "auto") != "auto") c.delta = kv.num("algorithm.delta", c.delta);
  c.alpha = kv.str("algorithm.alpha", c.alpha);
  c.budget = kv.str("algorithm.budget", c.budget);
  c.T = static_cast<int>(kv.integer("algorithm.T", c.T));
  c.K = static_cast<int>(kv.integer("algorithm.K", c.K));
  c.c = kv.num("algorithm.c", c.c);
  c.r0 = kv.num("algorithm.r0", c.r0);
  c.n_fm = static_cast<int>(kv.integer("algorithm.n_fm", c.n_fm));
  c.baseline_steps = static_cast<int>(kv.integer("algorithm.baseline_steps", c.baseline_steps));
  c.stop_gap = kv.num("algorithm.stop_gap", c.stop_gap);

  c.csv = kv.str("output.csv", c.csv);
  c.summary = kv.str("output.summary", c.summary);
  c.deterministic_clock = kv.flag("output.deterministic_clock", c.deterministic_clock);
  c.moreau = kv.flag("output.moreau", c.moreau);
  c.seed = static_cast<std::uint64_t>(kv.integer("seed", static_cast<long long>(c.seed)));

  if (c.m < 1) throw std::runtime_error("config: topology.m must be >= 1");
  if (c.K < 0) throw std::runtime_error("config: algorithm.K must be >= 0");
  return c;
}

}  // namespace dcat
