#include "dcat/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dcat/linalg.hpp"

namespace dcat {

namespace {

// log(1 + exp(-t))
double softplus_neg(double t) { return std::log1p(std::exp(-std::abs(t))) + std::max(0.0, -t); }

// d/dt log(1 + exp(-t)) = -1 / (1 + exp(t))
double softplus_neg_deriv(double t) {
  if (t >= 0) {
    double e = std::exp(-t);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(t));
}

void check_dim(const AgentLoss& a, const Vec& x) {
  if (x.size() != a.dim()) throw std::invalid_argument("dimension mismatch in loss evaluation");
}

}  // namespace

double huber_value(double t, double lambda, double gamma) {
  double a = std::abs(t);
  if (a >= lambda / (2.0 * gamma)) return lambda * (a - lambda / (4.0 * gamma));
  return gamma * t * t;
}

double huber_deriv(double t, double lambda, double gamma) {
  if (std::abs(t) >= lambda / (2.0 * gamma)) return t > 0 ? lambda : (t < 0 ? -lambda : 0.0);
  return 2.0 * gamma * t;
}

AgentLoss AgentLoss::logistic(Mat A, Vec b, double gamma) {
  if (A.rows() == 0 || A.rows() != b.size()) throw std::invalid_argument("logistic: bad shard");
  if (gamma < 0) throw std::invalid_argument("logistic: gamma < 0");
  return {LossKind::logistic, std::move(A), std::move(b), gamma, 0.0};
}

AgentLoss AgentLoss::quadratic(Mat H, Vec c) {
  if (H.rows() == 0 || H.rows() != H.cols() || H.rows() != c.size())
    throw std::invalid_argument("quadratic: bad shapes");
  return {LossKind::quadratic, std::move(H), std::move(c), 0.0, 0.0};
}

AgentLoss AgentLoss::linreg(Mat A, Vec b, double gamma) {
  if (A.rows() == 0 || A.rows() != b.size()) throw std::invalid_argument("linreg: bad shard");
  if (gamma < 0) throw std::invalid_argument("linreg: gamma < 0");
  return {LossKind::linreg, std::move(A), std::move(b), gamma, 0.0};
}

AgentLoss AgentLoss::huber(Mat A, Vec b, double gamma, double lambda) {
  if (A.rows() == 0 || A.rows() != b.size()) throw std::invalid_argument("huber: bad shard");
  if (gamma <= 0 || lambda < 0) throw std::invalid_argument("huber: need gamma > 0, lambda >= 0");
  return {LossKind::huber, std::move(A), std::move(b), gamma, lambda};
}

int AgentLoss::dim() const { return static_cast<int>(A.cols()); }

int AgentLoss::n() const { return kind == LossKind::quadratic ? 1 : static_cast<int>(A.rows()); }

double AgentLoss::value(const Vec& x) const {
  check_dim(*this, x);
  switch (kind) {
    case LossKind::quadratic:
      return 0.5 * x.dot(A * x) - b.dot(x);
    case LossKind::logistic: {
      Vec t = (A * x).cwiseProduct(b);
      double s = 0.0;
      for (Eigen::Index j = 0; j < t.size(); ++j) s += softplus_neg(t(j));
      return s / static_cast<double>(t.size()) + 0.5 * gamma * x.squaredNorm();
    }
    case LossKind::linreg:
      return 0.5 * (A * x - b).squaredNorm() / static_cast<double>(A.rows()) +
             0.5 * gamma * x.squaredNorm();
    case LossKind::huber: {
      double h = 0.0;
      for (Eigen::Index k = 0; k < x.size(); ++k) h += huber_value(x(k), huber_lambda, gamma);
      return (A * x - b).squaredNorm() / static_cast<double>(A.rows()) + h;
    }
  }
  return 0.0;
}

void AgentLoss::grad(const Vec& x, Vec& g) const { value_grad(x, g); }

double AgentLoss::value_grad(const Vec& x, Vec& g) const {
  check_dim(*this, x);
  const double inv_n = 1.0 / static_cast<double>(n());
  switch (kind) {
    case LossKind::quadratic:
      g = A * x - b;
      return 0.5 * x.dot(g - b);
    case LossKind::logistic: {
      Vec t = (A * x).cwiseProduct(b);
      Vec w(t.size());
      double s = 0.0;
      for (Eigen::Index j = 0; j < t.size(); ++j) {
        s += softplus_neg(t(j));
        w(j) = softplus_neg_deriv(t(j)) * b(j);
      }
      g = inv_n * (A.transpose() * w) + gamma * x;
      return s * inv_n + 0.5 * gamma * x.squaredNorm();
    }
    case LossKind::linreg: {
      Vec r = A * x - b;
      g = inv_n * (A.transpose() * r) + gamma * x;
      return 0.5 * r.squaredNorm() * inv_n + 0.5 * gamma * x.squaredNorm();
    }
    case LossKind::huber: {
      Vec r = A * x - b;
      g = 2.0 * inv_n * (A.transpose() * r);
      double h = 0.0;
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        h += huber_value(x(k), huber_lambda, gamma);
        g(k) += huber_deriv(x(k), huber_lambda, gamma);
      }
      return r.squaredNorm() * inv_n + h;
    }
  }
  return 0.0;
}

void AgentLoss::component_grad(int j, const Vec& x, Vec& g) const {
  check_dim(*this, x);
  if (j < 0 || j >= n()) throw std::invalid_argument("component index out of range");
  switch (kind) {
    case LossKind::quadratic:
      g = A * x - b;
      return;
    case LossKind::logistic: {
      double t = b(j) * A.row(j).dot(x);
      g = (softplus_neg_deriv(t) * b(j)) * A.row(j).transpose() + gamma * x;
      return;
    }
    case LossKind::linreg: {
      double r = A.row(j).dot(x) - b(j);
      g = r * A.row(j).transpose() + gamma * x;
      return;
    }
    case LossKind::huber: {
      double r = A.row(j).dot(x) - b(j);
      g = 2.0 * r * A.row(j).transpose();
      for (Eigen::Index k = 0; k < x.size(); ++k) g(k) += huber_deriv(x(k), huber_lambda, gamma);
      return;
    }
  }
}

double AgentLoss::component_L(int j) const {
  switch (kind) {
    case LossKind::quadratic:
      return sym_max_eig(A);
    case LossKind::logistic:
      return 0.25 * A.row(j).squaredNorm() + gamma;
    case LossKind::linreg:
      return A.row(j).squaredNorm() + gamma;
    case LossKind::huber:
      return 2.0 * A.row(j).squaredNorm() + 2.0 * gamma;
  }
  return 0.0;
}

Mat AgentLoss::hessian() const {
  const int d = dim();
  switch (kind) {
    case LossKind::quadratic:
      return A;
    case LossKind::linreg:
      return A.transpose() * A / static_cast<double>(A.rows()) + gamma * Mat::Identity(d, d);
    default:
      throw std::logic_error("hessian() requires a quadratic loss");
  }
}

Vec AgentLoss::linear_term() const {
  switch (kind) {
    case LossKind::quadratic:
      return b;
    case LossKind::linreg:
      return A.transpose() * b / static_cast<double>(A.rows());
    default:
      throw std::logic_error("linear_term() requires a quadratic loss");
  }
}

Mat AgentLoss::curvature_upper() const {
  const int d = dim();
  const Mat I = Mat::Identity(d, d);
  switch (kind) {
    case LossKind::logistic:
      return 0.25 * A.transpose() * A / static_cast<double>(A.rows()) + gamma * I;
    case LossKind::huber:
      return 2.0 * A.transpose() * A / static_cast<double>(A.rows()) + 2.0 * gamma * I;
    default:
      return hessian();
  }
}

Mat AgentLoss::curvature_lower() const {
  const int d = dim();
  switch (kind) {
    case LossKind::logistic:
      return gamma * Mat::Identity(d, d);
    case LossKind::huber:
      return 2.0 * A.transpose() * A / static_cast<double>(A.rows());
    default:
      return hessian();
  }
}

Regularizer Regularizer::l1(double lambda) {
  if (lambda < 0) throw std::invalid_argument("l1: lambda < 0");
  Regularizer r;
  r.kind = RegKind::l1;
  r.lambda = lambda;
  return r;
}

Regularizer Regularizer::box(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("box: lo > hi");
  Regularizer r;
  r.kind = RegKind::box;
  r.lo = lo;
  r.hi = hi;
  return r;
}

double Regularizer::value(const Vec& x) const {
  switch (kind) {
    case RegKind::zero:
      return 0.0;
    case RegKind::l1:
      return lambda * x.lpNorm<1>();
    case RegKind::box:
      for (Eigen::Index k = 0; k < x.size(); ++k)
        if (x(k) < lo || x(k) > hi) return std::numeric_limits<double>::infinity();
      return 0.0;
  }
  return 0.0;
}

Vec Regularizer::prox(const Vec& x, double theta) const {
  if (theta < 0) throw std::invalid_argument("prox: theta < 0");
  switch (kind) {
    case RegKind::zero:
      return x;
    case RegKind::l1: {
      const double t = theta * lambda;
      Vec y(x.size());
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        double v = x(k);
        y(k) = v > t ? v - t : (v < -t ? v + t : 0.0);
      }
      return y;
    }
    case RegKind::box:
      if (theta == 0) return x;
      return x.cwiseMax(lo).cwiseMin(hi);
  }
  return x;
}

double ProblemConstants::kappa_g() const {
  if (mu <= 0) throw std::domain_error("undefined condition number: mu = 0");
  return L / mu;
}

double ProblemConstants::kappa_l() const {
  if (mu_min <= 0) throw std::domain_error("undefined condition number: mu_min = 0");
  return L_max / mu_min;
}

double ProblemConstants::kappa_s() const {
  if (mu_min <= 0) throw std::domain_error("undefined condition number: mu_min = 0");
  return Lbar_max / mu_min;
}

ProblemConstants ProblemConstants::shifted(double delta) const {
  ProblemConstants c = *this;
  c.L += delta;
  c.mu += delta;
  c.L_max += delta;
  c.mu_min += delta;
  c.Lbar_max += delta;
  c.L_i.array() += delta;
  c.mu_i.array() += delta;
  for (auto& v : c.L_ij) v.array() += delta;
  return c;
}

ProblemConstants estimate_constants(const std::vector<AgentLoss>& agents) {
  if (agents.empty()) throw std::invalid_argument("problem needs m >= 1 agents");
  const int m = static_cast<int>(agents.size());
  const int d = agents[0].dim();
  ProblemConstants c;
  c.L_i.resize(m);
  c.mu_i.resize(m);
  c.L_ij.resize(m);

  std::vector<Mat> upper(m);
  std::vector<Mat> lower(m);
  Mat up_mean = Mat::Zero(d, d);
  Mat lo_mean = Mat::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    if (agents[i].dim() != d) throw std::invalid_argument("agents disagree on dimension");
    upper[i] = agents[i].curvature_upper();
    lower[i] = agents[i].curvature_lower();
    up_mean += upper[i] / m;
    lo_mean += lower[i] / m;
    c.L_i(i) = sym_max_eig(upper[i]);
    c.mu_i(i) = std::max(0.0, sym_min_eig(lower[i]));
    const int n = agents[i].n();
    c.n_max = std::max(c.n_max, n);
    c.L_ij[i].resize(n);
    if (agents[i].kind == LossKind::quadratic) {
      c.L_ij[i](0) = c.L_i(i);
    } else {
      for (int j = 0; j < n; ++j) c.L_ij[i](j) = agents[i].component_L(j);
    }
  }
  c.L = sym_max_eig(up_mean);
  c.mu = std::max(0.0, sym_min_eig(lo_mean));
  c.L_max = c.L_i.maxCoeff();
  c.mu_min = c.mu_i.minCoeff();
  c.Lbar_max = 0.0;
  for (int i = 0; i < m; ++i) c.Lbar_max = std::max(c.Lbar_max, c.L_ij[i].mean());

  // Similarity: exact for quadratics; for other kinds the data-scale
  // curvature spread plus the spread of the ridge weights.
  auto data_part = [](const AgentLoss& a) -> Mat {
    const double inv_n = 1.0 / static_cast<double>(a.A.rows());
    switch (a.kind) {
      case LossKind::logistic:
        return 0.25 * inv_n * a.A.transpose() * a.A;
      case LossKind::huber:
        return 2.0 * inv_n * a.A.transpose() * a.A;
      default:
        return a.hessian();
    }
  };
  auto ridge_part = [](const AgentLoss& a) -> double {
    switch (a.kind) {
      case LossKind::logistic:
        return a.gamma;
      case LossKind::huber:
        return 2.0 * a.gamma;
      default:
        return 0.0;
    }
  };
  Mat P_mean = Mat::Zero(d, d);
  double g_mean = 0.0;
  std::vector<Mat> P(m);
  for (int i = 0; i < m; ++i) {
    P[i] = data_part(agents[i]);
    P_mean += P[i] / m;
    g_mean += ridge_part(agents[i]) / m;
  }
  double dev = 0.0;
  double gdev = 0.0;
  for (int i = 0; i < m; ++i) {
    dev = std::max(dev, sym_norm2(P[i] - P_mean));
    gdev = std::max(gdev, std::abs(ridge_part(agents[i]) - g_mean));
  }
  c.beta = dev + gdev;
  return c;
}

CompositeProblem::CompositeProblem(std::vector<AgentLoss> agents, Regularizer reg)
    : reg_(reg) {
  if (agents.empty()) throw std::invalid_argument("problem needs m >= 1 agents");
  d_ = agents[0].dim();
  base_ = std::make_shared<const ProblemConstants>(estimate_constants(agents));
  agents_ = std::make_shared<const std::vector<AgentLoss>>(std::move(agents));
  constants_ = *base_;
  centers_ = Mat::Zero(m(), d_);
}

bool CompositeProblem::is_quadratic() const {
  for (const auto& a : *agents_)
    if (!a.is_quadratic()) return false;
  return true;
}

double CompositeProblem::local_value(int i, const Vec& x) const {
  double v = agent(i).value(x);
  if (delta_ != 0.0) v += 0.5 * delta_ * (x - centers_.row(i).transpose()).squaredNorm();
  return v;
}

Vec CompositeProblem::local_grad(int i, const Vec& x) const {
  Vec g;
  agent(i).grad(x, g);
  if (delta_ != 0.0) g += delta_ * (x - centers_.row(i).transpose());
  return g;
}

Vec CompositeProblem::component_grad(int i, int j, const Vec& x) const {
  Vec g;
  agent(i).component_grad(j, x, g);
  if (delta_ != 0.0) g += delta_ * (x - centers_.row(i).transpose());
  return g;
}

double CompositeProblem::smooth_value(const Vec& x) const {
  double s = 0.0;
  for (int i = 0; i < m(); ++i) s += local_value(i, x);
  return s / m();
}

Vec CompositeProblem::smooth_grad(const Vec& x) const {
  Vec g = Vec::Zero(d_);
  for (int i = 0; i < m(); ++i) g += local_grad(i, x);
  return g / m();
}

double CompositeProblem::value(const Vec& x) const { return smooth_value(x) + reg_.value(x); }

Mat CompositeProblem::grad_all(const Mat& X) const {
  Mat G(m(), d_);
  for (int i = 0; i < m(); ++i) G.row(i) = local_grad(i, X.row(i).transpose()).transpose();
  return G;
}

double CompositeProblem::mean_value(const Mat& X) const {
  double s = 0.0;
  for (int i = 0; i < m(); ++i) s += value(X.row(i).transpose());
  return s / m();
}

CompositeProblem CompositeProblem::with_shift(const Mat& Z, double delta) const {
  if (delta < 0) throw std::invalid_argument("delta < 0");
  if (Z.rows() != m() || Z.cols() != d_) throw std::invalid_argument("center matrix shape mismatch");
  CompositeProblem p = *this;
  p.delta_ = delta;
  p.centers_ = Z;
  p.constants_ = base_->shifted(delta);
  return p;
}

CompositeProblem build_subproblem(const CompositeProblem& p, const Mat& Z, double delta) {
  if (p.delta() != 0.0) throw std::invalid_argument("build_subproblem expects the unshifted problem");
  return p.with_shift(Z, delta);
}

}  // namespace dcat
