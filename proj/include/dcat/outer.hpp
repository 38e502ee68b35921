#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dcat/inner.hpp"
#include "dcat/problems.hpp"

namespace dcat {

enum class AlphaMode { scvx, cvx };
enum class BudgetPolicy { practical_scvx, practical_cvx, practical_vr, fixed, theory_scvx, theory_cvx };

double alpha_scvx(double mu, double delta);
double alpha_cvx0();
double alpha_cvx_next(double alpha_prev);
double extrapolation_coef(double alpha_k, double alpha_next);
Mat extrapolate(const Mat& x_new, const Mat& x_old, double alpha_k, double alpha_next);

struct BudgetContext {
  double L = 1.0;
  double mu = 0.0;
  double delta = 0.0;
  double alpha = 1.0;
  double rate = 1.0;        // r of the inner merit on u^k
  double budget_coef = 0.0; // 36 d_M, or the PMGT constant
  int m = 1;
  double c = 0.9;
  double r0 = 0.1;
  int fixed_T = 1;
};

// Natural logarithms; result floored at 1.
int inner_budget(int k, BudgetPolicy policy, const BudgetContext& ctx);

struct OuterSchedule {
  double delta = 0.0;
  AlphaMode alpha_mode = AlphaMode::scvx;
  BudgetPolicy budget = BudgetPolicy::practical_scvx;
  int fixed_T = 1;
  double c = 0.9;
  double r0 = 0.1;
};

enum class GapKind { dist, value };

struct TraceRow {
  int outer_k = 0;
  int inner_t = 0;
  Counters cum;
  double gap = 0.0;
  double consensus = 0.0;
  double merit = 0.0;
  double wallclock_ms = 0.0;
};

struct RunOptions {
  std::optional<Reference> reference;  // of the original problem, for the gap column
  GapKind gap_kind = GapKind::dist;
  bool inner_rows = true;              // one row per inner step, else one per outer loop
  // Optional subproblem oracle; enables merit values and warm-start records.
  std::function<Reference(const CompositeProblem&)> sub_reference;
  bool deterministic_clock = true;     // wallclock column written as 0
  double stop_gap = 0.0;               // stop after the outer loop whose gap is below this
};

struct RunTrace {
  std::vector<TraceRow> rows;
  // Index k: x^k, z^k, alpha^k (x^0 = z^0).
  std::vector<Mat> X;
  std::vector<Mat> Z;
  std::vector<double> alpha;
  std::vector<int> T;
  std::vector<Counters> cum_outer;  // counters at the end of loop k
  std::vector<double> gap_outer;    // gap of x^k
  // Warm-start records, filled when sub_reference is set: merit at the end of
  // loop k on u^k and at the start of loop k+1 on u^{k+1}.
  std::vector<double> merit_end;
  std::vector<double> merit_start;
  double delta = 0.0;
  double mu = 0.0;
  AlphaMode mode = AlphaMode::scvx;
  double warm_c = 2.0;
  double warm_d = 0.0;
};

double trace_gap(const CompositeProblem& p, const Mat& X, const Reference& ref, GapKind kind);

RunTrace run_dcatalyst(const CompositeProblem& p, InnerAlgorithm& inner, const OuterSchedule& sched,
                       int K, const Mat& x0, const RunOptions& opt = {});

// The inner algorithm on the original problem (delta = 0), rows every `every` steps.
RunTrace run_plain(const CompositeProblem& p, InnerAlgorithm& inner, int steps, const Mat& x0,
                   const RunOptions& opt = {}, int every = 1);

}  // namespace dcat
