#include "dcat/puda.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcat {

double puda_eta(const PudaMatrices& pm, const ProblemConstants& sub) {
  return (2.0 - pm.sigma_max_C) / (2.0 * sub.L_max);
}

PudaState puda_init(const Mat& x0, const PudaMatrices& pm, const ProblemConstants& sub) {
  if (pm.W.rows() != x0.rows()) throw std::invalid_argument("puda_init: agent count mismatch");
  PudaState s;
  s.x = x0;
  s.yhat = Mat::Zero(x0.rows(), x0.cols());
  s.eta = puda_eta(pm, sub);
  return s;
}

Counters puda_step(PudaState& s, const CompositeProblem& sub, const PudaMatrices& pm) {
  Counters c;
  const int m = sub.m();
  Mat v = s.x;
  if (!pm.C_zero) {
    v -= pm.C * s.x;
    c.comm += pm.rounds;
  }
  v -= s.eta * sub.grad_all(s.x);
  for (int i = 0; i < m; ++i) c.grads += sub.n(i);
  v -= s.yhat;
  if (!pm.Hsq_zero) {
    s.yhat += pm.Hsq * v;
    c.comm += pm.rounds;
  }
  Mat wv = v;
  if (!pm.W_identity) {
    wv = pm.W * v;
    c.comm += pm.rounds;
  }
  for (int i = 0; i < m; ++i)
    s.x.row(i) = sub.reg().prox(wv.row(i).transpose(), s.eta).transpose();
  c.prox += m;
  return c;
}

void puda_warm_start(PudaState& s, const PudaMatrices& pm, const ProblemConstants& sub_new) {
  s.eta = puda_eta(pm, sub_new);
}

double puda_delta_policy(const PudaMatrices& pm, const ProblemConstants& base) {
  const double s = pm.sigma_min_plus_Hsq;
  const double a = 2.0 - pm.sigma_max_C;
  const double den = a * a - 4.0 * s;
  if (!(den > 0.0) || 4.0 * s / den > 1e6)
    throw std::domain_error("network too well-connected to need delta; use delta = 0");
  const double d = 4.0 * s * (base.L_max - base.mu_min) / den - base.mu_min;
  return std::max(d, 0.0);
}

double puda_rate(const PudaMatrices& pm, const ProblemConstants& sub) {
  const double a = 2.0 - pm.sigma_max_C;
  double r = 4.0 * sub.L_max / (a * a * sub.mu_min);
  if (pm.sigma_min_plus_Hsq > 0.0) r = std::max(r, 1.0 / pm.sigma_min_plus_Hsq);
  return r;
}

double puda_warm_d(const PudaMatrices& pm, const ProblemConstants& sub, double delta) {
  if (!(pm.sigma_min_plus_Hsq > 0.0)) return 2.0;
  const double eta = puda_eta(pm, sub);
  return 2.0 + pm.sigma_max_Hsq * (9.0 + 9.0 * delta * delta * eta * eta) / pm.sigma_min_plus_Hsq;
}

Mat puda_dual_reference(const CompositeProblem& sub, const Vec& x_star, double eta) {
  Mat X = Mat::Zero(sub.m(), sub.d()).rowwise() + x_star.transpose();
  return -eta * disagreement(sub.grad_all(X));
}

double puda_merit(const PudaState& s, const Vec& x_star, const Mat& yhat_star) {
  const double m = static_cast<double>(s.x.rows());
  return ((s.x.rowwise() - x_star.transpose()).squaredNorm() + (s.yhat - yhat_star).squaredNorm()) /
         m;
}

}  // namespace dcat
