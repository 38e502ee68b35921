#include "dcat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dcat/apg.hpp"

namespace dcat {

ReferenceSolution fista_solve(const CompositeProblem& p, const Vec& x0, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("fista_solve: tol must be positive");
  const ProblemConstants& k = p.constants();
  ApgOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  opt.adaptive_restart = !(k.mu > 0.0);
  auto grad = [&](const Vec& x) { return p.smooth_grad(x); };
  ApgResult r = apg_minimize(grad, p.reg(), k.L, k.mu, x0, opt);
  ReferenceSolution s;
  s.x_star = r.x;
  s.u_star = p.value(r.x);
  s.residual = r.residual;
  s.iterations = r.iterations;
  s.converged = r.converged;
  return s;
}

ReferenceSolution fista_solve(const CompositeProblem& p, double tol, int max_iter) {
  Vec x0 = p.delta() > 0.0 ? Vec(p.centers().colwise().mean().transpose()) : Vec::Zero(p.d());
  return fista_solve(p, x0, tol, max_iter);
}

Reference reference_or_throw(const CompositeProblem& p, double tol) {
  ReferenceSolution s = fista_solve(p, tol);
  if (!s.converged) {
    std::ostringstream os;
    os << "reference solve did not converge (residual " << s.residual << ")";
    throw std::runtime_error(os.str());
  }
  return s.ref();
}

MoreauOracle::MoreauOracle(CompositeProblem p, double delta, double tol)
    : p_(std::move(p)), delta_(delta), tol_(tol) {
  if (!(delta > 0.0)) throw std::invalid_argument("MoreauOracle: delta must be positive");
  if (p_.delta() != 0.0) throw std::invalid_argument("MoreauOracle: expects the original problem");
}

const MoreauOracle::Entry& MoreauOracle::eval(const Vec& x) {
  std::vector<double> key(x.data(), x.data() + x.size());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const ProblemConstants& k = p_.constants();
  auto grad = [&](const Vec& y) -> Vec { return p_.smooth_grad(y) + delta_ * (y - x); };
  ApgOptions opt;
  opt.tol = tol_;
  opt.max_iter = 200000;
  ApgResult r = apg_minimize(grad, p_.reg(), k.L + delta_, k.mu + delta_, x, opt);
  if (!r.converged) {
    std::ostringstream os;
    os << "Moreau prox solve did not converge (residual " << r.residual << ")";
    throw std::runtime_error(os.str());
  }
  Entry e{r.x, p_.value(r.x) + 0.5 * delta_ * (r.x - x).squaredNorm()};
  return cache_.emplace(std::move(key), std::move(e)).first->second;
}

double MoreauOracle::value(const Vec& x) { return eval(x).value; }
Vec MoreauOracle::grad(const Vec& x) { return delta_ * (x - eval(x).p); }
Vec MoreauOracle::prox_point(const Vec& x) { return eval(x).p; }

EstSeqCertificate certify_estseq(const RunTrace& tr, const CompositeProblem& p,
                                 const Reference& ref, MoreauOracle& M, int k_max) {
  const double delta = tr.delta;
  if (!(delta > 0.0)) throw std::invalid_argument("certify_estseq: needs delta > 0");
  if (std::abs(M.delta() - delta) > 0.0)
    throw std::invalid_argument("certify_estseq: oracle delta differs from the trace");
  const int K = static_cast<int>(tr.X.size()) - 1;
  if (k_max < 0 || k_max > K) k_max = K;
  const int m = p.m();
  const double mu = tr.mode == AlphaMode::scvx ? tr.mu : 0.0;

  EstSeqCertificate cert;
  cert.mu_M = delta * mu / (delta + mu);
  cert.zeta0 = tr.mode == AlphaMode::scvx ? cert.mu_M : delta;
  const double a0 = tr.alpha[0];
  const double lemma_zeta0 = (delta * a0 * a0 - a0 * cert.mu_M) / (1.0 - a0);
  if (std::abs(lemma_zeta0 - cert.zeta0) > 1e-12 * (1.0 + cert.zeta0)) {
    std::ostringstream os;
    os << "zeta0 identity fails: lemma value " << lemma_zeta0 << " vs " << cert.zeta0;
    cert.violations.push_back(os.str());
  }
  const double Mstar = ref.u;
  const double muM = cert.mu_M;

  for (int i = 0; i < m; ++i) {
    double zeta = cert.zeta0;
    double lambda = 1.0;
    Vec x0 = tr.X[0].row(i).transpose();
    Vec a = x0;
    double psi = M.value(x0);
    const double psi0_opt = psi + 0.5 * zeta * (ref.x - a).squaredNorm();
    double eps_psi = 0.0;
    double tel = 0.0;  // sum_t eps_tot^t / lambda^{t+1}
    double eps_tot_prev = 0.0;
    for (int k = 0; k <= k_max; ++k) {
      Vec xk = tr.X[k].row(i).transpose();
      EstSeqRecord r;
      r.k = k;
      r.i = i;
      r.zeta = zeta;
      r.lambda = lambda;
      r.psi_star = psi;
      r.eps_psi = eps_psi;
      r.eps_tot = eps_tot_prev;
      r.M_x = M.value(xk);
      r.lower_ok = r.M_x <= psi + eps_psi + cert_slack(psi + eps_psi);
      r.psi_at_opt = psi + 0.5 * zeta * (ref.x - a).squaredNorm();
      const double mid = r.psi_at_opt + eps_psi - Mstar;
      r.chain_rhs = lambda * (psi0_opt - Mstar + tel);
      r.chain_ok = mid >= -cert_slack(0.0) && mid <= r.chain_rhs + cert_slack(r.chain_rhs);
      if (!r.lower_ok || !r.chain_ok) {
        std::ostringstream os;
        os << "k=" << k << " i=" << i << (r.lower_ok ? "" : " lower-bound") << (r.chain_ok ? "" : " chain")
           << " M(x)=" << r.M_x << " psi*+eps=" << psi + eps_psi << " mid=" << mid
           << " rhs=" << r.chain_rhs;
        cert.violations.push_back(os.str());
      }
      cert.records.push_back(r);
      if (k == k_max) break;

      const double al = tr.alpha[k];
      Vec zk = tr.Z[k].row(i).transpose();
      Vec xk1 = tr.X[k + 1].row(i).transpose();
      Vec gM = M.grad(zk);
      const double Mz = M.value(zk);
      Vec e = delta * (zk - xk1) - gM;
      Vec h = gM + e;
      const double zeta1 = (1.0 - al) * zeta + al * muM;
      cert.max_zeta_identity_err =
          std::max(cert.max_zeta_identity_err, std::abs(zeta1 - delta * al * al));
      const double psi1 = (1.0 - al) * psi + al * Mz - al * al / (2.0 * zeta1) * h.squaredNorm() +
                          al * (1.0 - al) * zeta / zeta1 *
                              (h.dot(a - zk) + 0.5 * muM * (zk - a).squaredNorm());
      Vec a1 = ((1.0 - al) * zeta / zeta1) * a + (al * muM / zeta1) * zk - (al / zeta1) * h;
      const double eps_psi1 =
          (1.0 - al) * eps_psi + (1.0 - al) * e.dot(xk - zk) + h.dot(e) / delta;
      const double eps_k = e.dot(ref.x - zk);
      const double eps_tot = eps_psi1 - (1.0 - al) * eps_psi + al * eps_k;
      const double lambda1 = lambda * (1.0 - al);
      tel += eps_tot / lambda1;
      eps_tot_prev = eps_tot;
      zeta = zeta1;
      a = a1;
      psi = psi1;
      eps_psi = eps_psi1;
      lambda = lambda1;
    }
  }
  return cert;
}

Assumption4Report check_assumption4(const InnerAlgorithm& proto, const CompositeProblem& sub,
                                    const Reference& ref, const std::vector<Mat>& starts,
                                    int steps, double slack) {
  Assumption4Report rep;
  const double r = proto.rate(sub);
  rep.bound = 1.0 - 1.0 / r;
  const double m = sub.m();
  for (const Mat& x0 : starts) {
    auto alg = proto.clone();
    Counters c;
    alg->start(sub, x0, c);
    const double L0 = alg->merit(sub, ref);
    double env = 0.0;
    for (int t = 1; t <= steps; ++t) {
      alg->step(sub);
      const double Lt = alg->merit(sub, ref);
      const double dist = (alg->x().rowwise() - ref.x.transpose()).squaredNorm() / m;
      if (dist > Lt * (1.0 + 1e-9) + 1e-14) rep.dominance_ok = false;
      if (L0 > 0.0 && Lt > 0.0) env = std::max(env, std::pow(Lt / L0, 1.0 / t));
      // Below this level the merit is rounding noise.
      if (Lt <= 1e-13 * L0) break;
    }
    rep.envelopes.push_back(env);
  }
  std::vector<double> s = rep.envelopes;
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  rep.median = n == 0 ? 0.0 : (n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]));
  const double lhs = rep.median > 0.0 ? std::log(rep.median) : -INFINITY;
  rep.passed = lhs <= (1.0 - slack) * std::log(rep.bound);
  return rep;
}

Assumption5Report check_assumption5(const RunTrace& tr, int m) {
  Assumption5Report rep;
  const std::size_t n = std::min(tr.merit_start.size(), tr.merit_end.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 >= tr.Z.size()) break;
    const double shift = (tr.Z[k] - tr.Z[k + 1]).squaredNorm() / m;
    const double rhs = tr.warm_c * tr.merit_end[k] + tr.warm_d * shift;
    const double lhs = tr.merit_start[k];
    ++rep.transitions;
    if (lhs > rhs + cert_slack(rhs)) ++rep.violations;
    // ratios below the slack scale are rounding noise
    if (rhs > 1e-8) rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
  }
  return rep;
}

}  // namespace dcat
