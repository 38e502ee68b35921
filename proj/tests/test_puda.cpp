#include <doctest.h>

#include "dcat/oracle.hpp"
#include "dcat/puda.hpp"
#include "gen.hpp"

using namespace dcat;

TEST_CASE("single-agent PUDA is gradient descent") {
  CompositeProblem p({AgentLoss::quadratic(Mat::Identity(1, 1), Vec::Zero(1))}, Regularizer::zero());
  PudaMatrices pm = prox_ed_triple(Mat::Identity(1, 1));
  PudaState s = puda_init(Mat::Constant(1, 1, 3.0), pm, p.constants());
  double x = 3.0;
  for (int t = 0; t < 20; ++t) {
    Counters c = puda_step(s, p, pm);
    CHECK(c.comm == 0);
    x -= s.eta * x;
    CHECK(s.x(0, 0) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("single-agent PUDA matches proximal gradient with l1") {
  gen::Rng r(40);
  CompositeProblem p(gen::logistics(r, 1, 9, 3, 0.1), Regularizer::l1(0.03));
  PudaMatrices pm = prox_ed_triple(Mat::Identity(1, 1));
  PudaState s = puda_init(Mat::Zero(1, 3), pm, p.constants());
  Vec x = Vec::Zero(3);
  for (int t = 0; t < 50; ++t) {
    puda_step(s, p, pm);
    x = p.reg().prox(x - s.eta * p.smooth_grad(x), s.eta);
    CHECK((s.x.row(0).transpose() - x).norm() < 1e-12);
  }
}

TEST_CASE("PUDA dual stays in the disagreement space and the fixed point is stationary") {
  gen::Rng r(41);
  const int m = 3, d = 2;
  CompositeProblem p(gen::quadratics(r, m, d, 1.0, 5.0), Regularizer::zero());
  PudaMatrices pm = prox_ed_triple(metropolis_weights(path_graph(m)));
  PudaState s = puda_init(r.mat(m, d), pm, p.constants());
  for (int t = 0; t < 10000; ++t) {
    puda_step(s, p, pm);
    if (t % 500 == 0) CHECK(s.yhat.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);
  }
  ReferenceSolution ref = fista_solve(p);
  Mat ystar = puda_dual_reference(p, ref.x_star, s.eta);
  // closed form vs the long run
  CHECK((s.yhat - ystar).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((s.x.rowwise() - ref.x_star.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  PudaState fp = s;
  fp.x = gen::stack(ref.x_star, m);
  fp.yhat = ystar;
  PudaState nxt = fp;
  puda_step(nxt, p, pm);
  CHECK((nxt.x - fp.x).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((nxt.yhat - fp.yhat).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(puda_merit(fp, ref.x_star, ystar) < 1e-20);
}

TEST_CASE("PUDA merit contracts at the declared rate") {
  gen::Rng r(42);
  const int m = 3, d = 2;
  CompositeProblem p(gen::quadratics(r, m, d, 1.0, 4.0), Regularizer::zero());
  PudaMatrices pm = prox_ed_triple(metropolis_weights(path_graph(m)));
  PudaState s = puda_init(Mat::Zero(m, d), pm, p.constants());
  ReferenceSolution ref = fista_solve(p);
  Mat ystar = puda_dual_reference(p, ref.x_star, s.eta);
  const double r_M = puda_rate(pm, p.constants());
  const double m0 = puda_merit(s, ref.x_star, ystar);
  const int T = 200;
  for (int t = 0; t < T; ++t) puda_step(s, p, pm);
  CHECK(puda_merit(s, ref.x_star, ystar) <= 10 * m0 * std::pow(1 - 1 / r_M, T));
}

TEST_CASE("PUDA merit of an x perturbation") {
  Vec xs = Vec::Ones(2);
  PudaState s;
  s.x = gen::stack(xs, 3);
  s.yhat = Mat::Zero(3, 2);
  s.x(1, 0) += 0.6;
  CHECK(puda_merit(s, xs, Mat::Zero(3, 2)) == doctest::Approx(0.36 / 3));
}

TEST_CASE("PUDA warm start keeps the state") {
  gen::Rng r(43);
  CompositeProblem p(gen::quadratics(r, 3, 2, 1.0, 3.0), Regularizer::zero());
  PudaMatrices pm = prox_ed_triple(metropolis_weights(path_graph(3)));
  PudaState s = puda_init(r.mat(3, 2), pm, p.constants());
  for (int t = 0; t < 5; ++t) puda_step(s, p, pm);
  PudaState before = s;
  CompositeProblem sub = build_subproblem(p, r.mat(3, 2), 2.0);
  puda_warm_start(s, pm, sub.constants());
  CHECK(s.x == before.x);
  CHECK(s.yhat == before.yhat);
  CHECK(s.eta == doctest::Approx(puda_eta(pm, sub.constants())));
}

TEST_CASE("PUDA delta policy") {
  PudaMatrices pm;
  pm.sigma_min_plus_Hsq = 1.0 / 6;
  pm.sigma_max_C = 0.0;
  ProblemConstants k;
  k.L_max = 10;
  k.mu_min = 1;
  CHECK(puda_delta_policy(pm, k) == doctest::Approx(0.8).epsilon(1e-12));
  k.L_max = 1;
  CHECK(puda_delta_policy(pm, k) == 0.0);
  k.L_max = 10;
  pm.sigma_min_plus_Hsq = 1.0 - 1e-9;  // (2 - 0)^2 / 4 from below
  CHECK_THROWS_AS(puda_delta_policy(pm, k), std::domain_error);
  pm.sigma_min_plus_Hsq = 1.5;
  CHECK_THROWS_AS(puda_delta_policy(pm, k), std::domain_error);
}

TEST_CASE("PUDA counters") {
  gen::Rng r(44);
  CompositeProblem p(gen::logistics(r, 3, 4, 2, 0.1), Regularizer::zero());
  Mat Wt = metropolis_weights(path_graph(3));
  PudaMatrices ed = prox_ed_triple(Wt);
  PudaState s = puda_init(Mat::Zero(3, 2), ed, p.constants());
  Counters c = puda_step(s, p, ed);
  CHECK(c.comm == 2);
  CHECK(c.grads == 12);
  CHECK(c.prox == 3);
  PudaMatrices ex = extra_triple(Wt);
  PudaState s2 = puda_init(Mat::Zero(3, 2), ex, p.constants());
  CHECK(puda_step(s2, p, ex).comm == 3);
}
