#include <doctest.h>

#include <cmath>

#include "dcat/oracle.hpp"
#include "dcat/outer.hpp"
#include "dcat/synth.hpp"
#include "gen.hpp"

using namespace dcat;

namespace {

// Forwards to a wrapped solver and sums every counter it hands back.
class Tally : public InnerAlgorithm {
 public:
  explicit Tally(std::unique_ptr<InnerAlgorithm> in) : in_(std::move(in)) {}
  std::string name() const override { return in_->name(); }
  void start(const CompositeProblem& sub, const Mat& x0, Counters& c) override {
    Counters local;
    in_->start(sub, x0, local);
    total += local;
    c += local;
  }
  void warm_start(const CompositeProblem& s, const Mat& zn, const Mat& zo) override {
    in_->warm_start(s, zn, zo);
  }
  Counters step(const CompositeProblem& sub) override {
    if (fail_at >= 0 && ++steps > fail_at) throw std::runtime_error("boom");
    Counters c = in_->step(sub);
    total += c;
    return c;
  }
  const Mat& x() const override { return in_->x(); }
  double delta_policy(const ProblemConstants& b) const override { return in_->delta_policy(b); }
  double rate(const CompositeProblem& s) const override { return in_->rate(s); }
  double warm_d(const CompositeProblem& s) const override { return in_->warm_d(s); }
  double merit(const CompositeProblem& s, const Reference& r) const override {
    return in_->merit(s, r);
  }
  std::unique_ptr<InnerAlgorithm> clone() const override {
    return std::make_unique<Tally>(in_->clone());
  }

  Counters total;
  int fail_at = -1;
  int steps = 0;

 private:
  std::unique_ptr<InnerAlgorithm> in_;
};

}  // namespace

TEST_CASE("alpha schedules") {
  CHECK(alpha_scvx(2.0, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(alpha_scvx(1.0, 0.0) == 1.0);
  CHECK(alpha_scvx(1.0, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(alpha_scvx(0.0, 1.0), std::domain_error);
  CHECK(alpha_cvx0() == doctest::Approx(0.6180339887).epsilon(1e-9));
  const double q = alpha_cvx0() * alpha_cvx0();
  CHECK(alpha_cvx_next(alpha_cvx0()) == doctest::Approx((-q + std::sqrt(q * q + 4 * q)) / 2).epsilon(1e-15));
  CHECK(alpha_cvx_next(alpha_cvx0()) == doctest::Approx(0.45585).epsilon(1e-4));
  CHECK_THROWS_AS(alpha_cvx_next(1.0), std::invalid_argument);
}

TEST_CASE("delta alpha^2 equals mu_M") {
  gen::Rng r(60);
  for (int t = 0; t < 200; ++t) {
    const double mu = r.uniform(1e-3, 10), delta = r.uniform(0, 100);
    const double a = alpha_scvx(mu, delta);
    CHECK(a > 0);
    CHECK(a <= 1);
    const double muM = mu * delta / (mu + delta);
    CHECK(std::abs(delta * a * a - muM) <= 1e-14 * (1 + muM));
  }
}

TEST_CASE("convex alpha recursion and the lambda sandwich") {
  double a = alpha_cvx0();
  double lambda = 1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double k2 = (k + 2.0) * (k + 2.0);
    CHECK(lambda >= 2.0 / k2 - 1e-12);
    CHECK(lambda <= 4.0 / k2 + 1e-12);
    const double an = alpha_cvx_next(a);
    CHECK(an < a);
    CHECK(std::abs(an * an - (1 - an) * a * a) <= 1e-15);
    lambda *= 1 - a;
    a = an;
  }
}

TEST_CASE("extrapolation") {
  CHECK(extrapolation_coef(0.5, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const double a0 = alpha_cvx0();
  const double a1 = alpha_cvx_next(a0);
  CHECK(extrapolation_coef(a0, a1) == doctest::Approx(a0 * (1 - a0) / (a0 * a0 + a1)).epsilon(1e-15));
  CHECK(extrapolation_coef(a0, a1) == doctest::Approx(0.28178).epsilon(1e-3));
  gen::Rng r(61);
  Mat x = r.mat(3, 2);
  CHECK(extrapolate(x, x, 0.3, 0.3) == x);
  Mat xo = r.mat(3, 2);
  Mat z = extrapolate(x, xo, 0.5, 0.5);
  CHECK((z - (x + (x - xo) / 3.0)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(extrapolate(x, r.mat(2, 2), 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("inner budgets") {
  BudgetContext c;
  c.L = 20;
  c.mu = 1;
  CHECK(inner_budget(0, BudgetPolicy::practical_scvx, c) == 3);
  CHECK(inner_budget(0, BudgetPolicy::practical_cvx, c) == 1);
  CHECK(inner_budget(9, BudgetPolicy::practical_cvx, c) == 3);
  c.L = std::exp(4.0);
  CHECK(inner_budget(0, BudgetPolicy::practical_vr, c) == 2);
  c.fixed_T = 7;
  CHECK(inner_budget(4, BudgetPolicy::fixed, c) == 7);
  c.rate = 10;
  c.r0 = 0.1;
  const int t0 = inner_budget(0, BudgetPolicy::theory_cvx, c);
  CHECK(t0 == static_cast<int>(std::ceil(10 * std::log(std::pow(2.0, 5.2) + 1224 * std::pow(3.0, 4.2)))));
  CHECK(inner_budget(50, BudgetPolicy::theory_cvx, c) > t0);
  c.mu = 1;
  c.delta = 4;
  c.alpha = alpha_scvx(1, 4);
  c.budget_coef = 72;
  const int ts = inner_budget(0, BudgetPolicy::theory_scvx, c);
  CHECK(ts > 10 * std::log(2.0));
  c.budget_coef = 144;
  CHECK(inner_budget(0, BudgetPolicy::theory_scvx, c) >= ts);
}

TEST_CASE("K = 0 leaves only the initial record") {
  gen::Rng r(62);
  CompositeProblem p(gen::quadratics(r, 3, 2, 1, 4), Regularizer::zero());
  SonataInner in(SonataVariant::L, plain_gossip(make_topology(path_graph(3))));
  OuterSchedule s;
  s.delta = 1;
  RunTrace tr = run_dcatalyst(p, in, s, 0, Mat::Zero(3, 2));
  CHECK(tr.rows.size() == 1);
  CHECK(tr.X.size() == 1);
  CHECK(tr.T.empty());
  CHECK(tr.rows[0].cum.comm == 0);
}

TEST_CASE("single-agent catalyst on a quadratic decreases the gap every loop") {
  gen::Rng r(63);
  for (int seed = 0; seed < 3; ++seed) {
    CompositeProblem p({AgentLoss::quadratic(r.spd(4, 1, 20), r.vec(4))}, Regularizer::zero());
    SonataInner in(SonataVariant::L, plain_gossip(make_topology(Graph(1))));
    OuterSchedule s;
    s.delta = 19;
    RunOptions o;
    o.reference = fista_solve(p).ref();
    RunTrace tr = run_dcatalyst(p, in, s, 30, r.mat(1, 4), o);
    for (std::size_t k = 1; k < tr.gap_outer.size(); ++k) {
      if (tr.gap_outer[k - 1] < 1e-20) break;
      CHECK(tr.gap_outer[k] < tr.gap_outer[k - 1]);
    }
  }
}

TEST_CASE("trace counters equal the sum of inner counters") {
  gen::Rng r(64);
  CompositeProblem p(gen::logistics(r, 4, 5, 3, 0.1), Regularizer::l1(0.01));
  Topology t = make_topology(ring_graph(4));
  std::vector<std::unique_ptr<InnerAlgorithm>> ins;
  ins.push_back(std::make_unique<SonataInner>(SonataVariant::F, chebyshev_gossip(t, 2)));
  ins.push_back(std::make_unique<PudaInner>(prox_ed_triple(t.W)));
  ins.push_back(std::make_unique<PmgtInner>(t, 9, 2));
  for (auto& in : ins) {
    Tally tally(in->clone());
    OuterSchedule s;
    s.delta = 0.5;
    s.budget = BudgetPolicy::practical_scvx;
    RunTrace tr = run_dcatalyst(p, tally, s, 6, Mat::Zero(4, 3));
    const Counters& last = tr.rows.back().cum;
    CHECK(last.comm == tally.total.comm);
    CHECK(last.grads == tally.total.grads);
    CHECK(last.prox == tally.total.prox);
    CHECK(tr.cum_outer.back().grads == last.grads);
    for (std::size_t i = 1; i < tr.rows.size(); ++i) {
      CHECK(tr.rows[i].cum.comm >= tr.rows[i - 1].cum.comm);
      CHECK(tr.rows[i].cum.grads >= tr.rows[i - 1].cum.grads);
    }
  }
}

TEST_CASE("inner failures carry the outer context") {
  gen::Rng r(65);
  CompositeProblem p(gen::quadratics(r, 2, 2, 1, 2), Regularizer::zero());
  Tally tally(std::make_unique<SonataInner>(SonataVariant::L,
                                            plain_gossip(make_topology(path_graph(2)))));
  tally.fail_at = 4;
  OuterSchedule s;
  s.delta = 1;
  s.budget = BudgetPolicy::fixed;
  s.fixed_T = 3;
  try {
    run_dcatalyst(p, tally, s, 5, Mat::Zero(2, 2));
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("outer loop k=1, inner step t=2") != std::string::npos);
  }
}

TEST_CASE("warm starts satisfy the declared constants") {
  gen::Rng r(66);
  const int m = 3;
  CompositeProblem p(gen::linregs(r, m, 6, 3, 0.2), Regularizer::l1(0.02));
  Topology t = make_topology(path_graph(m));
  std::vector<std::unique_ptr<InnerAlgorithm>> ins;
  ins.push_back(std::make_unique<SonataInner>(SonataVariant::F, plain_gossip(t)));
  ins.push_back(std::make_unique<SonataInner>(SonataVariant::L, plain_gossip(t)));
  ins.push_back(std::make_unique<PudaInner>(prox_ed_triple(t.W)));
  for (auto& in : ins) {
    OuterSchedule s;
    s.delta = 1.0;
    s.budget = BudgetPolicy::fixed;
    s.fixed_T = 4;
    RunOptions o;
    o.sub_reference = [](const CompositeProblem& sub) { return reference_or_throw(sub); };
    RunTrace tr = run_dcatalyst(p, *in, s, 21, r.mat(m, 3), o);
    Assumption5Report rep = check_assumption5(tr, m);
    CHECK(rep.transitions == 20);
    CHECK_MESSAGE(rep.violations == 0, in->name() << " worst ratio " << rep.worst_ratio);
  }
}

TEST_CASE("strongly convex quadratics contract at the outer rate") {
  gen::Rng r(67);
  const int m = 3, d = 5;
  SimilaritySpec spec;
  spec.m = m;
  spec.d = d;
  spec.L = 50;
  spec.beta = 2;
  CompositeProblem p(synth_similarity_agents(spec), Regularizer::zero());
  Topology t = make_topology(complete_graph(m));
  SonataInner in(SonataVariant::L, plain_gossip(t));
  OuterSchedule s;
  s.delta = p.constants().L - p.constants().mu;
  s.budget = BudgetPolicy::practical_scvx;
  RunOptions o;
  o.reference = fista_solve(p).ref();
  const int K = 25;
  RunTrace tr = run_dcatalyst(p, in, s, K, r.mat(m, d), o);
  // least-squares slope of log gap against k
  double sk = 0, sy = 0, skk = 0, sky = 0;
  int n = 0;
  for (int k = 0; k <= K; ++k) {
    if (tr.gap_outer[k] < 1e-28) break;
    const double y = std::log(tr.gap_outer[k]);
    sk += k;
    sy += y;
    skk += k * k;
    sky += k * y;
    ++n;
  }
  const double slope = (n * sky - sk * sy) / (n * skk - sk * sk);
  const double a = alpha_scvx(p.constants().mu, s.delta);
  CHECK(slope <= std::log(1 - 0.9 * a) + 0.05);
}
