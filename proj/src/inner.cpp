#include "dcat/inner.hpp"

namespace dcat {

std::string SonataInner::name() const {
  return variant_ == SonataVariant::L ? "sonata-l" : "sonata-f";
}

void SonataInner::start(const CompositeProblem& sub, const Mat& x0, Counters& c) {
  state_ = sonata_init(sub, x0, &c);
}

void SonataInner::warm_start(const CompositeProblem& sub_new, const Mat& z_new, const Mat& z_old) {
  sonata_warm_start(state_, z_new, z_old, sub_new.delta());
}

Counters SonataInner::step(const CompositeProblem& sub) {
  return sonata_step(state_, sub, sonata_params(variant_, sub, gossip_));
}

double SonataInner::delta_policy(const ProblemConstants& base) const {
  return sonata_delta_policy(variant_, base);
}

double SonataInner::rate(const CompositeProblem& sub) const {
  return sonata_rate(variant_, sub.constants());
}

double SonataInner::warm_d(const CompositeProblem& sub) const {
  return sonata_warm_d(variant_, sub.constants(), sub.delta());
}

double SonataInner::merit(const CompositeProblem& sub, const Reference& ref) const {
  return sonata_merit(state_, sub, variant_, ref);
}

std::unique_ptr<InnerAlgorithm> SonataInner::clone() const {
  return std::make_unique<SonataInner>(*this);
}

void PudaInner::start(const CompositeProblem& sub, const Mat& x0, Counters&) {
  state_ = puda_init(x0, pm_, sub.constants());
}

void PudaInner::warm_start(const CompositeProblem& sub_new, const Mat&, const Mat&) {
  puda_warm_start(state_, pm_, sub_new.constants());
}

Counters PudaInner::step(const CompositeProblem& sub) { return puda_step(state_, sub, pm_); }

double PudaInner::delta_policy(const ProblemConstants& base) const {
  return puda_delta_policy(pm_, base);
}

double PudaInner::rate(const CompositeProblem& sub) const {
  return puda_rate(pm_, sub.constants());
}

double PudaInner::warm_d(const CompositeProblem& sub) const {
  return puda_warm_d(pm_, sub.constants(), sub.delta());
}

double PudaInner::merit(const CompositeProblem& sub, const Reference& ref) const {
  const double eta = puda_eta(pm_, sub.constants());
  return puda_merit(state_, ref.x, puda_dual_reference(sub, ref.x, eta));
}

std::unique_ptr<InnerAlgorithm> PudaInner::clone() const {
  return std::make_unique<PudaInner>(*this);
}

void PmgtInner::start(const CompositeProblem& sub, const Mat& x0, Counters& c) {
  params_ = pmgt_params(sub, topo_, n_fm_);
  state_ = pmgt_init(sub, x0, seed_, &c);
}

void PmgtInner::warm_start(const CompositeProblem& sub_new, const Mat& z_new, const Mat& z_old) {
  params_ = pmgt_params(sub_new, topo_, n_fm_);
  pmgt_warm_start(state_, z_new, z_old, sub_new.delta());
}

Counters PmgtInner::step(const CompositeProblem& sub) { return pmgt_step(state_, sub, params_); }

double PmgtInner::delta_policy(const ProblemConstants& base) const {
  return pmgt_delta_policy(base);
}

double PmgtInner::rate(const CompositeProblem& sub) const { return pmgt_rate(sub.constants()); }

double PmgtInner::warm_d(const CompositeProblem& sub) const {
  return pmgt_warm_d(sub.constants(), pmgt_params(sub, topo_, n_fm_), sub.delta());
}

double PmgtInner::merit(const CompositeProblem& sub, const Reference& ref) const {
  return pmgt_merit(state_, sub, params_, ref.x);
}

std::unique_ptr<InnerAlgorithm> PmgtInner::clone() const {
  return std::make_unique<PmgtInner>(*this);
}

}  // namespace dcat
