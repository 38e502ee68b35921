#include "dcat/apg.hpp"

#include <cmath>
#include <stdexcept>

namespace dcat {

ApgResult apg_minimize(const std::function<Vec(const Vec&)>& grad, const Regularizer& r, double L,
                       double mu, const Vec& x0, const ApgOptions& opt) {
  if (!(L > 0)) throw std::invalid_argument("apg: L must be positive");
  ApgResult res;
  const double step = 1.0 / L;
  const double q = mu > 0 ? std::sqrt(mu / L) : 0.0;
  const double beta_sc = mu > 0 ? (1.0 - q) / (1.0 + q) : 0.0;

  auto residual_at = [&](const Vec& x) {
    Vec g = grad(x);
    ++res.grad_calls;
    ++res.prox_calls;
    return (x - r.prox(x - step * g, step)).norm();
  };

  Vec x = x0;
  Vec y = x0;
  double t = 1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Vec g = grad(y);
    ++res.grad_calls;
    Vec x_new = r.prox(y - step * g, step);
    ++res.prox_calls;
    res.iterations = it;
    double gm = (x_new - y).norm();
    if (gm <= opt.tol) {
      double rr = residual_at(x_new);
      if (rr <= opt.tol) {
        res.x = x_new;
        res.residual = rr;
        res.converged = true;
        return res;
      }
    }
    double beta;
    if (mu > 0) {
      beta = beta_sc;
    } else {
      double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      beta = (t - 1.0) / t_new;
      t = t_new;
    }
    if (opt.adaptive_restart && (y - x_new).dot(x_new - x) > 0) {
      beta = 0.0;
      t = 1.0;
    }
    y = x_new + beta * (x_new - x);
    x = std::move(x_new);
  }
  res.x = x;
  res.residual = residual_at(x);
  res.converged = res.residual <= opt.tol;
  return res;
}

}  // namespace dcat
