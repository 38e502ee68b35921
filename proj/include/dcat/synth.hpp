#pragma once

#include <cstdint>
#include <vector>

#include "dcat/libsvm.hpp"
#include "dcat/problems.hpp"

namespace dcat {

// Gaussian design with geometrically decaying column scales (ratio `decay`
// between first and last column) and labels from a planted sparse model with
// a fraction `flip` of flipped signs.
Dataset synth_classification(int N, int d, double decay, double flip, std::uint64_t seed);

// Quadratic agents f_i = 1/2 x^T H_i x - c_i^T x with
//   mean H_i = Q diag(s) Q^T, s spread geometrically over [mu, L],
//   H_i - mean = scale * Q S^{1/2} R_i S^{1/2} Q^T, sum_i R_i = 0, S = diag(s - mu).
// L, mu are exact and beta = max_i |H_i - mean| hits the target exactly.
struct SimilaritySpec {
  int m = 10;
  int d = 20;
  double mu = 1.0;
  double L = 20.0;
  double beta = 4.0;
  std::uint64_t seed = 1;
};

std::vector<AgentLoss> synth_similarity_agents(const SimilaritySpec& s);

// The sweep form: for each n in n_list the perturbation is divided by sqrt(n),
// so beta shrinks like 1/sqrt(n) while the mean Hessian is unchanged.
std::vector<CompositeProblem> synth_similarity_sweep(int m, int d, const std::vector<int>& n_list,
                                                     std::uint64_t seed, double mu = 1.0,
                                                     double L = 20.0, double beta1 = 16.0);

// Splits a dataset over m agents and builds logistic losses.
std::vector<AgentLoss> logistic_agents(const Dataset& ds, int m, double gamma, std::uint64_t seed);

// Largest eigenvalue of mean_i (1/(4 n_i)) A_i^T A_i.
double logistic_data_L(const Dataset& ds, int m, std::uint64_t seed);

}  // namespace dcat
