#pragma once

#include <memory>
#include <vector>

#include "dcat/types.hpp"

namespace dcat {

enum class LossKind { logistic, quadratic, linreg, huber };

// One agent's smooth loss f_i. Finite-sum kinds hold n rows of data and
// f_i = (1/n) sum_j f_ij; the quadratic kind is a single component
// f_i(x) = 1/2 x^T H x - c^T x stored as A = H, b = c.
//
//   logistic: f_ij = log(1 + exp(-b_j <a_j, x>)) + gamma/2 |x|^2
//   linreg:   f_ij = 1/2 (a_j^T x - b_j)^2 + gamma/2 |x|^2
//   huber:    f_ij = (a_j^T x - b_j)^2 + sum_k h(x_k), h the Huber penalty
//             with parameters (lambda, gamma)
struct AgentLoss {
  LossKind kind = LossKind::quadratic;
  Mat A;
  Vec b;
  double gamma = 0.0;
  double huber_lambda = 0.0;

  static AgentLoss logistic(Mat A, Vec b, double gamma);
  static AgentLoss quadratic(Mat H, Vec c);
  static AgentLoss linreg(Mat A, Vec b, double gamma);
  static AgentLoss huber(Mat A, Vec b, double gamma, double lambda);

  int dim() const;
  int n() const;
  bool is_quadratic() const { return kind == LossKind::quadratic || kind == LossKind::linreg; }

  double value(const Vec& x) const;
  void grad(const Vec& x, Vec& g) const;
  double value_grad(const Vec& x, Vec& g) const;
  void component_grad(int j, const Vec& x, Vec& g) const;
  double component_L(int j) const;

  // Quadratic kinds: f(x) = 1/2 x^T H x - q^T x + const.
  Mat hessian() const;
  Vec linear_term() const;

  // Curvature sandwich lower(x) <= Hess f(x) <= upper for every x.
  Mat curvature_upper() const;
  Mat curvature_lower() const;
};

// Scalar Huber penalty and its derivative.
double huber_value(double t, double lambda, double gamma);
double huber_deriv(double t, double lambda, double gamma);

enum class RegKind { zero, l1, box };

struct Regularizer {
  RegKind kind = RegKind::zero;
  double lambda = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  static Regularizer zero() { return {}; }
  static Regularizer l1(double lambda);
  static Regularizer box(double lo, double hi);

  double value(const Vec& x) const;
  // argmin_y theta r(y) + 1/2 |y - x|^2
  Vec prox(const Vec& x, double theta) const;
};

struct ProblemConstants {
  double L = 0.0;
  double mu = 0.0;
  double L_max = 0.0;
  double mu_min = 0.0;
  double Lbar_max = 0.0;
  double beta = 0.0;
  Vec L_i;
  Vec mu_i;
  std::vector<Vec> L_ij;
  int n_max = 1;

  double kappa_g() const;
  double kappa_l() const;
  double kappa_s() const;
  // constants of f_i + delta/2 |x - z_i|^2 (beta is unchanged)
  ProblemConstants shifted(double delta) const;
};

ProblemConstants estimate_constants(const std::vector<AgentLoss>& agents);

// u(x) = (1/m) sum_i f_i^k(x) + r(x) with f_i^k = f_i + delta/2 |x - z_i|^2.
// delta = 0 gives the original problem. Copies share the agent data.
class CompositeProblem {
 public:
  CompositeProblem() = default;
  CompositeProblem(std::vector<AgentLoss> agents, Regularizer reg);

  int m() const { return static_cast<int>(agents_->size()); }
  int d() const { return d_; }
  int n(int i) const { return (*agents_)[i].n(); }
  const AgentLoss& agent(int i) const { return (*agents_)[i]; }
  const Regularizer& reg() const { return reg_; }
  double delta() const { return delta_; }
  const Mat& centers() const { return centers_; }
  const ProblemConstants& constants() const { return constants_; }
  const ProblemConstants& base_constants() const { return *base_; }
  bool is_quadratic() const;

  double local_value(int i, const Vec& x) const;
  Vec local_grad(int i, const Vec& x) const;
  Vec component_grad(int i, int j, const Vec& x) const;

  double smooth_value(const Vec& x) const;
  Vec smooth_grad(const Vec& x) const;
  double value(const Vec& x) const;

  Mat grad_all(const Mat& X) const;        // row i = grad f_i^k(x_i)
  double mean_value(const Mat& X) const;   // (1/m) sum_i u(x_i)

  // Same agents and regularizer with a fresh proximal shift.
  CompositeProblem with_shift(const Mat& Z, double delta) const;

 private:
  std::shared_ptr<const std::vector<AgentLoss>> agents_;
  std::shared_ptr<const ProblemConstants> base_;
  Regularizer reg_;
  int d_ = 0;
  double delta_ = 0.0;
  Mat centers_;
  ProblemConstants constants_;
};

// u^k of the outer loop. Requires p to be unshifted.
CompositeProblem build_subproblem(const CompositeProblem& p, const Mat& Z, double delta);

}  // namespace dcat
