#pragma once

#include "dcat/network.hpp"
#include "dcat/problems.hpp"

namespace dcat {

// Dual variable is stored as yhat = H y, so only H^2 is ever applied.
struct PudaState {
  Mat x;
  Mat yhat;
  double eta = 0.0;
};

// eta = (2 - sigma_max(C)) / (2 (L_max + delta)), evaluated on the subproblem.
double puda_eta(const PudaMatrices& pm, const ProblemConstants& sub);

PudaState puda_init(const Mat& x0, const PudaMatrices& pm, const ProblemConstants& sub);

Counters puda_step(PudaState& s, const CompositeProblem& sub, const PudaMatrices& pm);

// x and yhat are carried unchanged; eta is retuned for the new subproblem.
void puda_warm_start(PudaState& s, const PudaMatrices& pm, const ProblemConstants& sub_new);

// Throws domain_error when the network mixes too well for the formula.
double puda_delta_policy(const PudaMatrices& pm, const ProblemConstants& base);

double puda_rate(const PudaMatrices& pm, const ProblemConstants& sub);
double puda_warm_d(const PudaMatrices& pm, const ProblemConstants& sub, double delta);

// Fixed-point dual: yhat* = -eta (grad F(1 x*^T) - 1 gbar^T).
Mat puda_dual_reference(const CompositeProblem& sub, const Vec& x_star, double eta);

double puda_merit(const PudaState& s, const Vec& x_star, const Mat& yhat_star);

}  // namespace dcat
