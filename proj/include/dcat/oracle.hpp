#pragma once

#include <map>
#include <string>
#include <vector>

#include "dcat/inner.hpp"
#include "dcat/outer.hpp"
#include "dcat/problems.hpp"

namespace dcat {

struct ReferenceSolution {
  Vec x_star;
  double u_star = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  Reference ref() const { return {x_star, u_star}; }
};

// Centralized minimization of u = (1/m) sum_i f_i^k + r. Adaptive restart is
// switched on when u is not strongly convex.
ReferenceSolution fista_solve(const CompositeProblem& p, double tol = 1e-12, int max_iter = 200000);
ReferenceSolution fista_solve(const CompositeProblem& p, const Vec& x0, double tol, int max_iter);

// Throws std::runtime_error when the solve does not reach tol.
Reference reference_or_throw(const CompositeProblem& p, double tol = 1e-12);

// Moreau envelope M(x) = min_y u(y) + delta/2 |y - x|^2, memoized by x.
class MoreauOracle {
 public:
  MoreauOracle(CompositeProblem p, double delta, double tol = 1e-12);
  double value(const Vec& x);
  Vec grad(const Vec& x);  // delta (x - p(x))
  Vec prox_point(const Vec& x);
  double delta() const { return delta_; }
  std::size_t cache_size() const { return cache_.size(); }

 private:
  struct Entry {
    Vec p;
    double value;
  };
  const Entry& eval(const Vec& x);
  CompositeProblem p_;
  double delta_;
  double tol_;
  std::map<std::vector<double>, Entry> cache_;
};

struct EstSeqRecord {
  int k = 0;
  int i = 0;
  double zeta = 0.0;
  double lambda = 0.0;
  double psi_star = 0.0;
  double eps_psi = 0.0;
  double eps_tot = 0.0;  // epsilon_tot^{k-1} (0 at k = 0)
  double M_x = 0.0;
  double psi_at_opt = 0.0;
  double chain_rhs = 0.0;
  bool lower_ok = true;  // M(x^k) <= psi^{k,*} + eps_psi^k
  bool chain_ok = true;  // 0 <= psi^k(x*) + eps_psi^k - M* <= lambda^k (...)
};

struct EstSeqCertificate {
  double mu_M = 0.0;
  double zeta0 = 0.0;
  std::vector<EstSeqRecord> records;
  std::vector<std::string> violations;
  double max_zeta_identity_err = 0.0;  // max_k |zeta^{k+1} - delta (alpha^k)^2|
  bool passed() const { return violations.empty(); }
};

// Rebuilds the estimating sequence from the trace (x^k, z^k, alpha^k).
EstSeqCertificate certify_estseq(const RunTrace& trace, const CompositeProblem& p,
                                 const Reference& ref, MoreauOracle& M, int k_max = -1);

inline double cert_slack(double rhs) { return 1e-8 * (1.0 + std::abs(rhs)); }

struct Assumption4Report {
  std::vector<double> envelopes;  // per seed: max_t (L_t / L_0)^{1/t}
  double median = 0.0;
  double bound = 0.0;             // 1 - 1/r
  bool dominance_ok = true;       // (1/m)|x - x*|^2 <= L(s) along every run
  bool passed = false;            // rate only; dominance is reported separately
};

// Runs `steps` inner steps from each start point on a fixed subproblem.
Assumption4Report check_assumption4(const InnerAlgorithm& proto, const CompositeProblem& sub,
                                    const Reference& ref, const std::vector<Mat>& starts,
                                    int steps, double slack = 0.05);

struct Assumption5Report {
  int transitions = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs over transitions with rhs > 1e-8
};

// Checks merit_start[k] <= c_M merit_end[k] + (d_M/m)|z^k - z^{k+1}|^2.
Assumption5Report check_assumption5(const RunTrace& trace, int m);

}  // namespace dcat
