#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dcat/network.hpp"
#include "dcat/problems.hpp"

namespace dcat {

struct PmgtParams {
  double eta = 0.0;
  int n_fm = 1;
  Mat W;
  double rho = 0.0;
  std::vector<Vec> prob;  // p_ij, proportional to the subproblem's L_ij
  std::vector<Vec> cdf;
};

// ceil((1/sqrt(1 - rho)) log(36 max{6 kappa_s, n}))
int pmgt_fastmix_rounds(double rho, double kappa_s, int n);

// eta = 1/(16 L_max) on the subproblem; n_fm < 0 selects the default round count.
PmgtParams pmgt_params(const CompositeProblem& sub, const Topology& topo, int n_fm = -1);

struct PmgtState {
  Mat x, y, g, v, gtilde;
  std::vector<std::mt19937_64> rng;  // one stream per agent
};

std::uint64_t splitmix64(std::uint64_t x);

PmgtState pmgt_init(const CompositeProblem& sub, const Mat& x0, std::uint64_t seed,
                    Counters* c = nullptr);

// (1/(n p_ij)) (grad f_ij(x) - grad f_ij(v)) + gtilde
Vec pmgt_estimator(const CompositeProblem& sub, const PmgtParams& p, int i, int j, const Vec& x,
                   const Vec& v, const Vec& gtilde);

Counters pmgt_step(PmgtState& s, const CompositeProblem& sub, const PmgtParams& p);

// y, g and gtilde move by delta (z_old - z_new); x and v are carried.
void pmgt_warm_start(PmgtState& s, const Mat& z_new, const Mat& z_old, double delta);

double pmgt_delta_policy(const ProblemConstants& base);

double pmgt_r(const ProblemConstants& sub);
double pmgt_rate(const ProblemConstants& sub);
// c_pm; throws domain_error when 40 r_pm rho_pm^2 >= 1.
double pmgt_c(const ProblemConstants& sub, const PmgtParams& p);
double pmgt_warm_d(const ProblemConstants& sub, const PmgtParams& p, double delta);

double pmgt_merit(const PmgtState& s, const CompositeProblem& sub, const PmgtParams& p,
                  const Vec& x_star);

}  // namespace dcat
