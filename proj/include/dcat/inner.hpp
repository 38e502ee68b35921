#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "dcat/network.hpp"
#include "dcat/pmgt.hpp"
#include "dcat/problems.hpp"
#include "dcat/puda.hpp"
#include "dcat/sonata.hpp"

namespace dcat {

// Uniform face of an inner solver as seen by the outer loop. The proximal
// weight is read from the subproblem (sub.delta()).
class InnerAlgorithm {
 public:
  virtual ~InnerAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual void start(const CompositeProblem& sub, const Mat& x0, Counters& c) = 0;
  virtual void warm_start(const CompositeProblem& sub_new, const Mat& z_new, const Mat& z_old) = 0;
  virtual Counters step(const CompositeProblem& sub) = 0;
  virtual const Mat& x() const = 0;
  virtual double delta_policy(const ProblemConstants& base) const = 0;
  virtual double rate(const CompositeProblem& sub) const = 0;
  virtual double warm_c() const { return 2.0; }
  virtual double warm_d(const CompositeProblem& sub) const = 0;
  // Numerator weight of the strongly convex theory budget.
  virtual double budget_coef(const CompositeProblem& sub) const { return 36.0 * warm_d(sub); }
  virtual double merit(const CompositeProblem& sub, const Reference& ref) const = 0;
  virtual std::unique_ptr<InnerAlgorithm> clone() const = 0;
};

class SonataInner : public InnerAlgorithm {
 public:
  SonataInner(SonataVariant v, Gossip gossip) : variant_(v), gossip_(std::move(gossip)) {}
  std::string name() const override;
  void start(const CompositeProblem& sub, const Mat& x0, Counters& c) override;
  void warm_start(const CompositeProblem& sub_new, const Mat& z_new, const Mat& z_old) override;
  Counters step(const CompositeProblem& sub) override;
  const Mat& x() const override { return state_.x; }
  double delta_policy(const ProblemConstants& base) const override;
  double rate(const CompositeProblem& sub) const override;
  double warm_d(const CompositeProblem& sub) const override;
  double merit(const CompositeProblem& sub, const Reference& ref) const override;
  std::unique_ptr<InnerAlgorithm> clone() const override;

  const SonataState& state() const { return state_; }
  SonataState& state() { return state_; }
  const Gossip& gossip() const { return gossip_; }
  SonataVariant variant() const { return variant_; }

 private:
  SonataVariant variant_;
  Gossip gossip_;
  SonataState state_;
};

class PudaInner : public InnerAlgorithm {
 public:
  explicit PudaInner(PudaMatrices pm) : pm_(std::move(pm)) {}
  std::string name() const override { return "puda"; }
  void start(const CompositeProblem& sub, const Mat& x0, Counters& c) override;
  void warm_start(const CompositeProblem& sub_new, const Mat& z_new, const Mat& z_old) override;
  Counters step(const CompositeProblem& sub) override;
  const Mat& x() const override { return state_.x; }
  double delta_policy(const ProblemConstants& base) const override;
  double rate(const CompositeProblem& sub) const override;
  double warm_d(const CompositeProblem& sub) const override;
  double merit(const CompositeProblem& sub, const Reference& ref) const override;
  std::unique_ptr<InnerAlgorithm> clone() const override;

  const PudaState& state() const { return state_; }
  const PudaMatrices& matrices() const { return pm_; }

 private:
  PudaMatrices pm_;
  PudaState state_;
};

class PmgtInner : public InnerAlgorithm {
 public:
  PmgtInner(Topology topo, std::uint64_t seed, int n_fm = -1)
      : topo_(std::move(topo)), seed_(seed), n_fm_(n_fm) {}
  std::string name() const override { return "pmgt"; }
  void start(const CompositeProblem& sub, const Mat& x0, Counters& c) override;
  void warm_start(const CompositeProblem& sub_new, const Mat& z_new, const Mat& z_old) override;
  Counters step(const CompositeProblem& sub) override;
  const Mat& x() const override { return state_.x; }
  double delta_policy(const ProblemConstants& base) const override;
  double rate(const CompositeProblem& sub) const override;
  double warm_d(const CompositeProblem& sub) const override;
  double budget_coef(const CompositeProblem&) const override { return 90.0; }
  double merit(const CompositeProblem& sub, const Reference& ref) const override;
  std::unique_ptr<InnerAlgorithm> clone() const override;

  const PmgtState& state() const { return state_; }
  const PmgtParams& params() const { return params_; }

 private:
  Topology topo_;
  std::uint64_t seed_;
  int n_fm_;
  PmgtParams params_;
  PmgtState state_;
};

}  // namespace dcat
