#pragma once

#include <vector>

#include "dcat/network.hpp"
#include "dcat/problems.hpp"

namespace dcat {

enum class SonataVariant { L, F };

struct SonataParams {
  SonataVariant variant = SonataVariant::L;
  // Surrogate weight: L + delta for the linearized model, beta for the full one.
  double weight = 0.0;
  Gossip gossip;
  double solver_tol = 1e-8;
  int solver_max_iter = 10000;
};

SonataParams sonata_params(SonataVariant v, const CompositeProblem& sub, const Gossip& gossip);

// g caches grad f_i^k(x_i) for the current subproblem.
struct SonataState {
  Mat x;
  Mat y;
  Mat g;
};

// y^0 = g^0 = grad F^k(x^0).
SonataState sonata_init(const CompositeProblem& sub, const Mat& x0, Counters* c = nullptr);

Counters sonata_step(SonataState& s, const CompositeProblem& sub, const SonataParams& p);

// Carries x; shifts y (and the cached gradients) by delta (z_old - z_new) so
// that mean(y) tracks the gradients of the next subproblem.
void sonata_warm_start(SonataState& s, const Mat& z_new, const Mat& z_old, double delta);

double sonata_delta_policy(SonataVariant v, const ProblemConstants& base);

// Rates and merit weights evaluated on the subproblem constants (mu + delta, L + delta).
double sonata_rate(SonataVariant v, const ProblemConstants& sub);
double sonata_eta(SonataVariant v, const ProblemConstants& sub);
// Largest rho allowed by the contraction lemma.
double sonata_rho_bound(SonataVariant v, const ProblemConstants& sub);
// d_M of the warm-start inequality (c_M = 2); delta is the proximal weight.
double sonata_warm_d(SonataVariant v, const ProblemConstants& sub, double delta);

double sonata_merit(const SonataState& s, const CompositeProblem& sub, SonataVariant v,
                    const Reference& ref);

// mean(y) - mean(grad F^k(x)) in max norm; 0 up to rounding.
double sonata_tracking_error(const SonataState& s, const CompositeProblem& sub);

}  // namespace dcat
