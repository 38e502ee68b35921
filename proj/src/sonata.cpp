#include "dcat/sonata.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dcat/apg.hpp"

namespace dcat {

namespace {

std::int64_t full_grad_cost(const CompositeProblem& p) {
  std::int64_t s = 0;
  for (int i = 0; i < p.m(); ++i) s += p.n(i);
  return s;
}

// argmin f_i^k(x) + <v, x> + w/2 |x - xi|^2 + r(x)
Vec local_solve_F(const CompositeProblem& sub, int i, const Vec& xi, const Vec& v, double w,
                  const SonataParams& p, Counters& c) {
  const AgentLoss& a = sub.agent(i);
  const double delta = sub.delta();
  if (a.is_quadratic() && sub.reg().kind == RegKind::zero) {
    const int d = sub.d();
    Mat K = a.hessian() + (delta + w) * Mat::Identity(d, d);
    Vec rhs = a.linear_term() - v + w * xi;
    if (delta != 0.0) rhs += delta * sub.centers().row(i).transpose();
    c.grads += sub.n(i);
    return K.ldlt().solve(rhs);
  }
  const ProblemConstants& k = sub.constants();
  const double L = k.L_i(i) + w;
  const double mu = k.mu_i(i) + w;
  auto grad = [&](const Vec& x) -> Vec { return sub.local_grad(i, x) + v + w * (x - xi); };
  ApgOptions opt;
  opt.tol = p.solver_tol;
  opt.max_iter = p.solver_max_iter;
  ApgResult r = apg_minimize(grad, sub.reg(), L, mu, xi, opt);
  c.grads += static_cast<std::int64_t>(r.grad_calls) * sub.n(i);
  c.prox += r.prox_calls;
  if (!r.converged) {
    std::ostringstream os;
    os << "SONATA-F local solver did not converge at agent " << i << " (residual " << r.residual
       << ")";
    throw std::runtime_error(os.str());
  }
  return r.x;
}

}  // namespace

SonataParams sonata_params(SonataVariant v, const CompositeProblem& sub, const Gossip& gossip) {
  SonataParams p;
  p.variant = v;
  p.gossip = gossip;
  p.weight = v == SonataVariant::L ? sub.constants().L : sub.constants().beta;
  return p;
}

SonataState sonata_init(const CompositeProblem& sub, const Mat& x0, Counters* c) {
  SonataState s;
  s.x = x0;
  s.g = sub.grad_all(x0);
  s.y = s.g;
  if (c) c->grads += full_grad_cost(sub);
  return s;
}

Counters sonata_step(SonataState& s, const CompositeProblem& sub, const SonataParams& p) {
  Counters c;
  const int m = sub.m();
  Mat half(m, sub.d());
  if (p.variant == SonataVariant::L) {
    if (!(p.weight > 0)) throw std::invalid_argument("SONATA-L needs a positive surrogate weight");
    const double inv = 1.0 / p.weight;
    for (int i = 0; i < m; ++i) {
      Vec xi = s.x.row(i).transpose();
      half.row(i) = sub.reg().prox(xi - inv * s.y.row(i).transpose(), inv).transpose();
    }
    c.prox += m;
  } else {
    for (int i = 0; i < m; ++i) {
      Vec xi = s.x.row(i).transpose();
      Vec v = (s.y.row(i) - s.g.row(i)).transpose();
      half.row(i) = local_solve_F(sub, i, xi, v, p.weight, p, c).transpose();
    }
  }
  s.x = p.gossip.apply(half);
  Mat g_new = sub.grad_all(s.x);
  c.grads += full_grad_cost(sub);
  s.y = p.gossip.apply(s.y + g_new - s.g);
  s.g = std::move(g_new);
  c.comm += 2 * p.gossip.rounds;
  return c;
}

void sonata_warm_start(SonataState& s, const Mat& z_new, const Mat& z_old, double delta) {
  if (z_new.rows() != s.x.rows() || z_new.cols() != s.x.cols() || z_old.rows() != z_new.rows() ||
      z_old.cols() != z_new.cols())
    throw std::invalid_argument("sonata_warm_start: shape mismatch");
  if (delta == 0.0) return;
  Mat shift = delta * (z_old - z_new);
  s.y += shift;
  s.g += shift;
}

double sonata_delta_policy(SonataVariant v, const ProblemConstants& base) {
  double d = v == SonataVariant::L ? base.L - base.mu : base.beta - base.mu;
  return std::max(d, 0.0);
}

double sonata_rate(SonataVariant v, const ProblemConstants& sub) {
  if (v == SonataVariant::F) return 2.0 + 32.0 * sub.beta / sub.mu;
  return 2.0 + 8.0 * sub.L / sub.mu;
}

double sonata_eta(SonataVariant v, const ProblemConstants& sub) {
  if (v == SonataVariant::F) return 34.0 / (sub.mu * (16.0 * sub.beta + sub.mu));
  return 10.0 / (sub.mu * (4.0 * sub.L + sub.mu));
}

double sonata_rho_bound(SonataVariant v, const ProblemConstants& sub) {
  const double L = sub.L, mu = sub.mu, b = sub.beta, Lm = sub.L_max;
  double r2;
  if (v == SonataVariant::F) {
    r2 = mu * mu * b * b / (5712.0 * (L + b) * (L + b) * (9.0 * b * b + 4.0 * (L + b) * (L + b)));
  } else {
    r2 = std::min(mu * mu / (13440.0 * Lm * Lm), L * L / (12.0 * L * L + 84.0 * Lm * Lm));
  }
  return std::sqrt(r2);
}

double sonata_warm_d(SonataVariant v, const ProblemConstants& sub, double delta) {
  const double eta = sonata_eta(v, sub);
  return 2.0 * delta * delta / (sub.mu * sub.mu) + 16.0 * eta * delta * delta;
}

double sonata_merit(const SonataState& s, const CompositeProblem& sub, SonataVariant v,
                    const Reference& ref) {
  const ProblemConstants& k = sub.constants();
  const int m = sub.m();
  double gap = 0.0;
  for (int i = 0; i < m; ++i) gap += sub.value(s.x.row(i).transpose()) - ref.u;
  gap = std::max(gap, 0.0);
  const double eta = sonata_eta(v, k);
  double xp = disagreement(s.x).squaredNorm();
  double yp = disagreement(s.y).squaredNorm();
  return 2.0 / (k.mu * m) * gap + eta / m * (4.0 * k.L_max * k.L_max * xp + 2.0 * yp);
}

double sonata_tracking_error(const SonataState& s, const CompositeProblem& sub) {
  Mat G = sub.grad_all(s.x);
  return (s.y.colwise().mean() - G.colwise().mean()).cwiseAbs().maxCoeff();
}

}  // namespace dcat
