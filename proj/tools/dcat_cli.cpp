#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dcat/config.hpp"
#include "dcat/experiment.hpp"
#include "dcat/libsvm.hpp"
#include "dcat/oracle.hpp"
#include "dcat/synth.hpp"

namespace fs = std::filesystem;
using namespace dcat;

namespace {

struct Common {
  std::optional<long long> seed;
  std::string out;
  double oracle_tol = 1e-12;
};

ExperimentConfig load_config(const std::string& path, const Common& o) {
  KeyValueConfig kv = KeyValueConfig::load(path);
  if (o.seed) kv.set("seed", std::to_string(*o.seed));
  ExperimentConfig cfg = ExperimentConfig::from(kv);
  if (!cfg.source.empty() && cfg.source != "synth" && fs::path(cfg.source).is_relative())
    cfg.source = (fs::path(path).parent_path() / cfg.source).string();
  return cfg;
}

int cmd_run(const std::string& path, const Common& o) {
  ExperimentConfig cfg = load_config(path, o);
  if (!o.out.empty()) cfg.csv = o.out;
  ExperimentResult r = run_experiment(cfg, o.oracle_tol);
  for (const auto& p : write_result(cfg, r)) std::cout << "wrote " << p << "\n";
  return 0;
}

int cmd_sweep(const std::string& dir, const Common& o) {
  std::vector<fs::path> cfgs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".cfg") cfgs.push_back(e.path());
  std::sort(cfgs.begin(), cfgs.end());
  if (cfgs.empty()) throw std::runtime_error("no .cfg files in " + dir);
  const fs::path out = o.out.empty() ? fs::path(dir) : fs::path(o.out);
  fs::create_directories(out);
  for (const auto& p : cfgs) {
    ExperimentConfig cfg = load_config(p.string(), o);
    cfg.csv = (out / (p.stem().string() + ".csv")).string();
    cfg.summary.clear();
    ExperimentResult r = run_experiment(cfg, o.oracle_tol);
    for (const auto& w : write_result(cfg, r)) std::cout << "wrote " << w << "\n";
  }
  return 0;
}

// Replays the config, compares with the stored trace, then runs the certificates.
int cmd_verify(const std::string& trace_path, const std::string& cfg_path, const Common& o) {
  ExperimentConfig cfg = load_config(cfg_path, o);
  ExperimentResult r = run_experiment(cfg, o.oracle_tol);
  bool ok = true;
  if (read_text(trace_path) != r.csv) {
    std::cout << "trace mismatch: " << trace_path << " differs from the replay\n";
    ok = false;
  }
  Experiment e = build_experiment(cfg);
  if (e.schedule.delta > 0.0) {
    MoreauOracle M(e.problem, e.schedule.delta);
    EstSeqCertificate cert = certify_estseq(r.trace, e.problem, r.reference, M);
    std::cout << "estimating-sequence certificate: " << (cert.passed() ? "pass" : "FAIL") << " ("
              << cert.records.size() << " records, " << cert.violations.size() << " violations)\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(cert.violations.size(), 10); ++i)
      std::cout << "  " << cert.violations[i] << "\n";
    ok = ok && cert.passed();
  } else {
    std::cout << "delta = 0: no estimating-sequence certificate\n";
  }
  return ok ? 0 : 2;
}

int cmd_datagen(const std::string& spec, const Common& o) {
  KeyValueConfig kv = KeyValueConfig::load(spec);
  if (o.seed) kv.set("seed", std::to_string(*o.seed));
  ExperimentConfig cfg = ExperimentConfig::from(kv);
  const std::string out = o.out.empty() ? kv.str("output.libsvm", "data.libsvm") : o.out;
  Dataset ds = synth_classification(cfg.samples, cfg.dim, cfg.decay, cfg.flip, cfg.seed);
  write_libsvm(ds, out);
  std::cout << "wrote " << out << " (" << ds.size() << " rows, d = " << ds.d << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DCatalyst decentralized optimization simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Common o;
  long long seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "override the master seed");
  app.add_option("--out", o.out, "output path (csv for run, directory for sweep, file for datagen)");
  app.add_option("--oracle-tol", o.oracle_tol, "reference solver tolerance")->check(CLI::PositiveNumber);

  std::string a, b;
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", a)->required();
  auto* sweep = app.add_subcommand("sweep", "run every .cfg in a directory");
  sweep->add_option("config-dir", a)->required();
  auto* verify = app.add_subcommand("verify", "replay a config and certify the trace");
  verify->add_option("trace", a)->required();
  verify->add_option("config", b)->required();
  auto* datagen = app.add_subcommand("datagen", "write a synthetic LIBSVM dataset");
  datagen->add_option("spec", a)->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (*seed_opt) o.seed = seed;
  try {
    if (*run) return cmd_run(a, o);
    if (*sweep) return cmd_sweep(a, o);
    if (*verify) return cmd_verify(a, b, o);
    if (*datagen) return cmd_datagen(a, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
