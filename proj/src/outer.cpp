#include "dcat/outer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dcat {

double alpha_scvx(double mu, double delta) {
  if (!(mu > 0.0)) throw std::domain_error("alpha_scvx needs mu > 0; use the convex recursion");
  if (delta < 0.0) throw std::invalid_argument("alpha_scvx: delta < 0");
  return std::sqrt(mu / (mu + delta));
}

double alpha_cvx0() { return (std::sqrt(5.0) - 1.0) / 2.0; }

double alpha_cvx_next(double alpha_prev) {
  if (!(alpha_prev > 0.0 && alpha_prev < 1.0))
    throw std::invalid_argument("alpha_cvx_next: alpha_prev must lie in (0,1)");
  const double q = alpha_prev * alpha_prev;
  // positive root of a^2 + q a - q = 0, written without cancellation
  return 2.0 * q / (q + std::sqrt(q * q + 4.0 * q));
}

double extrapolation_coef(double alpha_k, double alpha_next) {
  return alpha_k * (1.0 - alpha_k) / (alpha_k * alpha_k + alpha_next);
}

Mat extrapolate(const Mat& x_new, const Mat& x_old, double alpha_k, double alpha_next) {
  if (x_new.rows() != x_old.rows() || x_new.cols() != x_old.cols())
    throw std::invalid_argument("extrapolate: shape mismatch");
  return x_new + extrapolation_coef(alpha_k, alpha_next) * (x_new - x_old);
}

int inner_budget(int k, BudgetPolicy policy, const BudgetContext& ctx) {
  double T = 1.0;
  switch (policy) {
    case BudgetPolicy::practical_scvx:
      T = std::ceil(std::log(ctx.L / ctx.mu));
      break;
    case BudgetPolicy::practical_cvx:
      T = std::ceil(std::log(k + 1.0));
      break;
    case BudgetPolicy::practical_vr:
      T = std::ceil(0.5 * std::log(ctx.L / ctx.mu));
      break;
    case BudgetPolicy::fixed:
      T = ctx.fixed_T;
      break;
    case BudgetPolicy::theory_scvx: {
      const double mu = ctx.mu, d = ctx.delta, c = ctx.c, m = ctx.m;
      const double md2 = (mu + d) * (mu + d) / (mu * mu);
      const double B = 2.0 + d / mu + (2.0 * m + 1.0) * md2 / (1.0 - c) +
                       2.0 * std::sqrt(2000.0) * md2 * std::sqrt(m) / ((1.0 - c) * (1.0 - c));
      const double q = 1.0 - c * ctx.alpha;
      T = std::ceil(ctx.rate * std::log((2.0 + ctx.budget_coef / (q * q) * B) / q));
      break;
    }
    case BudgetPolicy::theory_cvx:
      T = std::ceil(ctx.rate * std::log(std::pow(2.0, 5.0 + 2.0 * ctx.r0) +
                                        1224.0 * std::pow(k + 3.0, 4.0 + 2.0 * ctx.r0)));
      break;
  }
  if (!std::isfinite(T)) throw std::domain_error("inner_budget: non-finite budget");
  return std::max(1, static_cast<int>(std::min(T, 1e9)));
}

double trace_gap(const CompositeProblem& p, const Mat& X, const Reference& ref, GapKind kind) {
  const double m = static_cast<double>(X.rows());
  if (kind == GapKind::dist) return (X.rowwise() - ref.x.transpose()).squaredNorm() / m;
  return p.mean_value(X) - ref.u;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Recorder {
  const CompositeProblem& p;
  const RunOptions& opt;
  Clock::time_point t0 = Clock::now();
  RunTrace& trace;

  void row(int k, int t, const Counters& cum, const Mat& X, double merit) {
    TraceRow r;
    r.outer_k = k;
    r.inner_t = t;
    r.cum = cum;
    r.gap = opt.reference ? trace_gap(p, X, *opt.reference, opt.gap_kind)
                          : std::numeric_limits<double>::quiet_NaN();
    r.consensus = disagreement(X).squaredNorm() / static_cast<double>(X.rows());
    r.merit = merit;
    r.wallclock_ms = opt.deterministic_clock
                         ? 0.0
                         : std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    trace.rows.push_back(r);
  }
};

[[noreturn]] void rethrow_with_context(const std::exception& e, int k, int t) {
  throw std::runtime_error("outer loop k=" + std::to_string(k) + ", inner step t=" +
                           std::to_string(t) + ": " + e.what());
}

}  // namespace

RunTrace run_dcatalyst(const CompositeProblem& p, InnerAlgorithm& inner, const OuterSchedule& sched,
                       int K, const Mat& x0, const RunOptions& opt) {
  if (sched.delta < 0.0) throw std::invalid_argument("run_dcatalyst: delta < 0");
  if (K < 0) throw std::invalid_argument("run_dcatalyst: K < 0");
  if (x0.rows() != p.m() || x0.cols() != p.d())
    throw std::invalid_argument("run_dcatalyst: x0 must be m x d");
  const ProblemConstants& base = p.constants();
  if (sched.alpha_mode == AlphaMode::scvx && !(base.mu > 0.0))
    throw std::domain_error("strongly convex schedule needs mu > 0");

  RunTrace tr;
  tr.delta = sched.delta;
  tr.mu = base.mu;
  tr.mode = sched.alpha_mode;
  tr.warm_c = inner.warm_c();
  Recorder rec{p, opt, Clock::now(), tr};
  const double nan = std::numeric_limits<double>::quiet_NaN();

  double alpha = sched.alpha_mode == AlphaMode::scvx ? alpha_scvx(base.mu, sched.delta) : alpha_cvx0();
  Mat x_prev = x0;
  Mat z = x0;
  Mat z_prev = x0;
  Counters cum;
  tr.X.push_back(x0);
  tr.Z.push_back(z);
  tr.alpha.push_back(alpha);
  tr.gap_outer.push_back(opt.reference ? trace_gap(p, x0, *opt.reference, opt.gap_kind) : nan);

  bool first_row = true;
  for (int k = 0; k < K; ++k) {
    CompositeProblem sub = build_subproblem(p, z, sched.delta);
    std::optional<Reference> sref;
    if (opt.sub_reference) sref = opt.sub_reference(sub);
    try {
      if (k == 0)
        inner.start(sub, x0, cum);
      else
        inner.warm_start(sub, z, z_prev);
    } catch (const std::exception& e) {
      rethrow_with_context(e, k, 0);
    }
    if (sref) {
      if (k > 0) tr.merit_start.push_back(inner.merit(sub, *sref));
      if (k == 0) tr.warm_d = inner.warm_d(sub);
    }
    if (first_row) {
      rec.row(0, 0, cum, x0, sref ? inner.merit(sub, *sref) : nan);
      first_row = false;
    }

    BudgetContext ctx;
    ctx.L = base.L;
    ctx.mu = base.mu;
    ctx.delta = sched.delta;
    ctx.alpha = alpha;
    ctx.m = p.m();
    ctx.c = sched.c;
    ctx.r0 = sched.r0;
    ctx.fixed_T = sched.fixed_T;
    if (sched.budget == BudgetPolicy::theory_scvx || sched.budget == BudgetPolicy::theory_cvx) {
      ctx.rate = inner.rate(sub);
      ctx.budget_coef = inner.budget_coef(sub);
    }
    const int T = inner_budget(k, sched.budget, ctx);
    tr.T.push_back(T);

    for (int t = 1; t <= T; ++t) {
      try {
        cum += inner.step(sub);
      } catch (const std::exception& e) {
        rethrow_with_context(e, k, t);
      }
      if (opt.inner_rows && t < T) rec.row(k, t, cum, inner.x(), nan);
    }
    const double m_end = sref ? inner.merit(sub, *sref) : nan;
    if (sref) tr.merit_end.push_back(m_end);
    rec.row(k, T, cum, inner.x(), m_end);

    Mat x_new = inner.x();
    const double a_next =
        sched.alpha_mode == AlphaMode::scvx ? alpha : alpha_cvx_next(alpha);
    z_prev = z;
    z = extrapolate(x_new, x_prev, alpha, a_next);
    x_prev = x_new;
    alpha = a_next;
    tr.X.push_back(x_new);
    tr.Z.push_back(z);
    tr.alpha.push_back(alpha);
    tr.cum_outer.push_back(cum);
    const double g = opt.reference ? trace_gap(p, x_new, *opt.reference, opt.gap_kind) : nan;
    tr.gap_outer.push_back(g);
    if (opt.stop_gap > 0.0 && g < opt.stop_gap) break;
  }
  if (first_row) rec.row(0, 0, cum, x0, nan);
  return tr;
}

RunTrace run_plain(const CompositeProblem& p, InnerAlgorithm& inner, int steps, const Mat& x0,
                   const RunOptions& opt, int every) {
  if (every < 1) throw std::invalid_argument("run_plain: every < 1");
  RunTrace tr;
  tr.mu = p.constants().mu;
  Recorder rec{p, opt, Clock::now(), tr};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Counters cum;
  inner.start(p, x0, cum);
  rec.row(0, 0, cum, x0, nan);
  tr.X.push_back(x0);
  for (int t = 1; t <= steps; ++t) {
    try {
      cum += inner.step(p);
    } catch (const std::exception& e) {
      rethrow_with_context(e, 0, t);
    }
    if (t % every == 0 || t == steps) {
      rec.row(0, t, cum, inner.x(), nan);
      if (opt.stop_gap > 0.0 && opt.reference &&
          trace_gap(p, inner.x(), *opt.reference, opt.gap_kind) < opt.stop_gap)
        break;
    }
  }
  tr.X.push_back(inner.x());
  return tr;
}

}  // namespace dcat
