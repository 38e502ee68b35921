#include "dcat/pmgt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcat {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_index(const Vec& cdf, double u) {
  const double* b = cdf.data();
  const double* e = b + cdf.size();
  const double* it = std::upper_bound(b, e, u);
  int j = static_cast<int>(it - b);
  return std::min(j, static_cast<int>(cdf.size()) - 1);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int pmgt_fastmix_rounds(double rho, double kappa_s, int n) {
  if (rho <= 0.0) return 1;
  double v = std::log(36.0 * std::max(6.0 * kappa_s, static_cast<double>(n))) / std::sqrt(1.0 - rho);
  return std::max(1, static_cast<int>(std::ceil(v)));
}

PmgtParams pmgt_params(const CompositeProblem& sub, const Topology& topo, int n_fm) {
  const ProblemConstants& k = sub.constants();
  PmgtParams p;
  p.eta = 1.0 / (16.0 * k.L_max);
  p.W = topo.W;
  p.rho = topo.rho;
  p.n_fm = n_fm >= 0 ? n_fm : pmgt_fastmix_rounds(topo.rho, k.kappa_s(), k.n_max);
  for (int i = 0; i < sub.m(); ++i) {
    Vec w = k.L_ij[i];
    Vec pr = w / w.sum();
    Vec c(pr.size());
    double acc = 0.0;
    for (int j = 0; j < pr.size(); ++j) c(j) = (acc += pr(j));
    c(c.size() - 1) = 1.0;
    p.prob.push_back(pr);
    p.cdf.push_back(c);
  }
  return p;
}

PmgtState pmgt_init(const CompositeProblem& sub, const Mat& x0, std::uint64_t seed, Counters* c) {
  PmgtState s;
  s.x = x0;
  s.v = x0;
  s.g = sub.grad_all(x0);
  s.gtilde = s.g;
  s.y = s.g;
  for (int i = 0; i < sub.m(); ++i) {
    s.rng.emplace_back(splitmix64(seed + static_cast<std::uint64_t>(i)));
    if (c) c->grads += sub.n(i);
  }
  return s;
}

Vec pmgt_estimator(const CompositeProblem& sub, const PmgtParams& p, int i, int j, const Vec& x,
                   const Vec& v, const Vec& gtilde) {
  const double scale = 1.0 / (sub.n(i) * p.prob[i](j));
  return scale * (sub.component_grad(i, j, x) - sub.component_grad(i, j, v)) + gtilde;
}

Counters pmgt_step(PmgtState& s, const CompositeProblem& sub, const PmgtParams& p) {
  Counters c;
  const int m = sub.m();
  Mat half(m, sub.d());
  for (int i = 0; i < m; ++i) {
    Vec xi = s.x.row(i).transpose() - p.eta * s.y.row(i).transpose();
    half.row(i) = sub.reg().prox(xi, p.eta).transpose();
  }
  c.prox += m;
  Mat x_new = fastmix(half, p.n_fm, p.W, p.rho);
  Mat g_new(m, sub.d());
  for (int i = 0; i < m; ++i) {
    const int n = sub.n(i);
    auto& rng = s.rng[i];
    if (uniform01(rng) * n < 1.0) {
      Vec xo = s.x.row(i).transpose();
      s.v.row(i) = xo.transpose();
      s.gtilde.row(i) = sub.local_grad(i, xo).transpose();
      c.grads += n;
    }
    const int j = sample_index(p.cdf[i], uniform01(rng));
    g_new.row(i) = pmgt_estimator(sub, p, i, j, x_new.row(i).transpose(), s.v.row(i).transpose(),
                                  s.gtilde.row(i).transpose())
                       .transpose();
    c.grads += 2;
  }
  s.x = std::move(x_new);
  s.y = fastmix(s.y + g_new - s.g, p.n_fm, p.W, p.rho);
  s.g = std::move(g_new);
  c.comm += 2 * static_cast<std::int64_t>(p.n_fm);
  return c;
}

void pmgt_warm_start(PmgtState& s, const Mat& z_new, const Mat& z_old, double delta) {
  if (z_new.rows() != s.x.rows() || z_new.cols() != s.x.cols() || z_old.rows() != z_new.rows() ||
      z_old.cols() != z_new.cols())
    throw std::invalid_argument("pmgt_warm_start: shape mismatch");
  if (delta == 0.0) return;
  Mat shift = delta * (z_old - z_new);
  s.y += shift;
  s.g += shift;
  s.gtilde += shift;
}

double pmgt_delta_policy(const ProblemConstants& base) {
  return std::max(base.Lbar_max / base.n_max - base.mu, 0.0);
}

double pmgt_r(const ProblemConstants& sub) {
  return std::max(12.0 * sub.kappa_s(), 2.0 * sub.n_max);
}

double pmgt_rate(const ProblemConstants& sub) { return 4.0 * pmgt_r(sub); }

double pmgt_c(const ProblemConstants& sub, const PmgtParams& p) {
  const double r = pmgt_r(sub);
  const double rho_pm = std::pow(1.0 - std::sqrt(1.0 - p.rho), p.n_fm);
  const double den = 1.0 - 40.0 * r * rho_pm * rho_pm;
  if (!(den > 0.0)) throw std::domain_error("PMGT-LSVRG under-mixing: 40 r_pm rho_pm^2 >= 1");
  return 20.0 * r / den;
}

double pmgt_warm_d(const ProblemConstants& sub, const PmgtParams& p, double delta) {
  const double e2 = p.eta * p.eta;
  const double n = sub.n_max;
  // sub.Lbar_max already includes delta
  return 2.0 + 8.0 * e2 * delta * delta + 8.0 * e2 * sub.Lbar_max * sub.Lbar_max / (n * n);
}

double pmgt_merit(const PmgtState& s, const CompositeProblem& sub, const PmgtParams& p,
                  const Vec& x_star) {
  const int m = sub.m();
  const double cpm = pmgt_c(sub.constants(), p);
  double df = 0.0;
  for (int i = 0; i < m; ++i) {
    const int n = sub.n(i);
    Vec vi = s.v.row(i).transpose();
    for (int j = 0; j < n; ++j) {
      Vec diff = sub.component_grad(i, j, vi) - sub.component_grad(i, j, x_star);
      df += diff.squaredNorm() / (n * p.prob[i](j) * n);
    }
  }
  df /= m;
  const double nn = sub.constants().n_max;
  Vec xbar = s.x.colwise().mean().transpose();
  double head = (xbar - x_star).squaredNorm() + 4.0 * nn * p.eta * p.eta * df;
  double tail = disagreement(s.x).squaredNorm() + p.eta * p.eta * disagreement(s.y).squaredNorm();
  return head / cpm + tail / m;
}

}  // namespace dcat
