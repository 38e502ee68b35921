#pragma once

#include <functional>

#include "dcat/problems.hpp"

namespace dcat {

struct ApgResult {
  Vec x;
  double residual = 0.0;  // |x - prox_{r/L}(x - grad(x)/L)|
  int iterations = 0;
  int grad_calls = 0;
  int prox_calls = 0;
  bool converged = false;
};

struct ApgOptions {
  double tol = 1e-8;
  int max_iter = 10000;
  bool adaptive_restart = false;  // gradient-based restart, used when mu = 0
};

// Accelerated proximal gradient on phi + r with phi L-smooth and
// mu-strongly convex. Constant momentum when mu > 0, FISTA sequence otherwise.
ApgResult apg_minimize(const std::function<Vec(const Vec&)>& grad, const Regularizer& r, double L,
                       double mu, const Vec& x0, const ApgOptions& opt);

}  // namespace dcat
