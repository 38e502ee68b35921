#include <doctest.h>

#include "dcat/oracle.hpp"
#include "dcat/pmgt.hpp"
#include "dcat/sonata.hpp"
#include "gen.hpp"

using namespace dcat;

TEST_CASE("LSVRG estimator is unbiased under the sampling law") {
  gen::Rng r(50);
  const int m = 3, n = 5, d = 3;
  CompositeProblem p(gen::logistics(r, m, n, d, 0.1), Regularizer::zero());
  CompositeProblem sub = build_subproblem(p, r.mat(m, d), 0.8);
  Topology t = make_topology(path_graph(m));
  PmgtParams prm = pmgt_params(sub, t);
  for (int i = 0; i < m; ++i) {
    CHECK(prm.prob[i].sum() == doctest::Approx(1.0).epsilon(1e-15));
    Vec x = r.vec(d), v = r.vec(d);
    Vec gt = sub.local_grad(i, v);
    Vec acc = Vec::Zero(d);
    for (int j = 0; j < n; ++j) acc += prm.prob[i](j) * pmgt_estimator(sub, prm, i, j, x, v, gt);
    CHECK((acc - sub.local_grad(i, x)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("PMGT tracking identity survives steps and warm starts") {
  for (int seed = 0; seed < 5; ++seed) {
    gen::Rng r(200 + seed);
    const int m = 4, d = 3;
    CompositeProblem p(gen::logistics(r, m, 6, d, 0.1), Regularizer::l1(0.01));
    Topology t = make_topology(erdos_renyi(m, 0.5, seed));
    const double delta = 0.5;
    Mat z = r.mat(m, d);
    CompositeProblem sub = build_subproblem(p, z, delta);
    PmgtParams prm = pmgt_params(sub, t, 3);
    PmgtState s = pmgt_init(sub, Mat::Zero(m, d), seed);
    for (int step = 0; step < 100; ++step) {
      pmgt_step(s, sub, prm);
      CHECK((s.y.colwise().mean() - s.g.colwise().mean()).cwiseAbs().maxCoeff() < 1e-10);
      if (step % 25 == 24) {
        Mat z2 = z + r.mat(m, d, 0.3);
        pmgt_warm_start(s, z2, z, delta);
        z = z2;
        sub = build_subproblem(p, z, delta);
        prm = pmgt_params(sub, t, 3);
        CHECK((s.y.colwise().mean() - s.g.colwise().mean()).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("PMGT warm start keeps the anchor gradient consistent") {
  gen::Rng r(51);
  const int m = 3, d = 2;
  CompositeProblem p(gen::linregs(r, m, 4, d, 0.1), Regularizer::zero());
  const double delta = 1.3;
  Mat z = r.mat(m, d), z2 = r.mat(m, d);
  CompositeProblem sub = build_subproblem(p, z, delta);
  PmgtState s = pmgt_init(sub, r.mat(m, d), 3);
  PmgtParams prm = pmgt_params(sub, make_topology(path_graph(m)));
  for (int t = 0; t < 7; ++t) pmgt_step(s, sub, prm);
  for (int i = 0; i < m; ++i)
    CHECK((s.gtilde.row(i).transpose() - sub.local_grad(i, s.v.row(i).transpose())).norm() < 1e-12);
  pmgt_warm_start(s, z2, z, delta);
  CompositeProblem sub2 = build_subproblem(p, z2, delta);
  for (int i = 0; i < m; ++i)
    CHECK((s.gtilde.row(i).transpose() - sub2.local_grad(i, s.v.row(i).transpose())).norm() < 1e-12);

  PmgtState c = s;
  pmgt_warm_start(s, z2, z2, delta);
  CHECK(s.y == c.y);
  pmgt_warm_start(s, z, z2, 0.0);
  CHECK(s.gtilde == c.gtilde);
}

TEST_CASE("single-component PMGT is deterministic gradient tracking") {
  gen::Rng r(52);
  const int m = 3, d = 2;
  CompositeProblem p(gen::quadratics(r, m, d, 1.0, 3.0), Regularizer::zero());
  Topology t = make_topology(path_graph(m));
  PmgtParams prm = pmgt_params(p, t, 2);
  CHECK(prm.prob[0](0) == 1.0);
  Mat x0 = r.mat(m, d);
  PmgtState s = pmgt_init(p, x0, 9);
  Mat x = x0, y = p.grad_all(x0), g = y;
  for (int k = 0; k < 30; ++k) {
    pmgt_step(s, p, prm);
    x = fastmix(x - prm.eta * y, prm.n_fm, t.W, t.rho);
    Mat gn = p.grad_all(x);
    y = fastmix(y + gn - g, prm.n_fm, t.W, t.rho);
    g = gn;
    CHECK((s.x - x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s.g - g).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("PMGT on a complete graph averages exactly with one round") {
  gen::Rng r(53);
  CompositeProblem p(gen::logistics(r, 3, 4, 2, 0.1), Regularizer::zero());
  Topology t = make_topology(complete_graph(3));
  PmgtParams prm = pmgt_params(p, t, 1);
  PmgtState s = pmgt_init(p, r.mat(3, 2), 4);
  pmgt_step(s, p, prm);
  CHECK(disagreement(s.x).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(disagreement(s.y).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("PMGT delta policy") {
  ProblemConstants k;
  k.n_max = 4;
  k.mu = 1;
  k.Lbar_max = 4;
  CHECK(pmgt_delta_policy(k) == 0.0);
  k.Lbar_max = 16;
  CHECK(pmgt_delta_policy(k) == 3.0);
  k.mu = 0;
  CHECK(pmgt_delta_policy(k) == 4.0);
}

TEST_CASE("default FastMix rounds satisfy the mixing condition on path-3") {
  gen::Rng r(54);
  CompositeProblem p(gen::logistics(r, 3, 10, 3, 0.05), Regularizer::zero());
  Topology t = make_topology(path_graph(3));
  PmgtParams prm = pmgt_params(p, t);
  const double rpm = pmgt_r(p.constants());
  const double rho_pm = std::pow(1 - std::sqrt(1 - t.rho), prm.n_fm);
  CHECK(40 * rpm * rho_pm * rho_pm < 1);
  CHECK_NOTHROW(pmgt_c(p.constants(), prm));
  prm.n_fm = 1;
  CHECK_THROWS_AS(pmgt_c(p.constants(), prm), std::domain_error);
}

TEST_CASE("PMGT merit vanishes at the optimum") {
  gen::Rng r(55);
  const int m = 3;
  CompositeProblem p(gen::linregs(r, m, 5, 2, 0.3), Regularizer::zero());
  ReferenceSolution ref = fista_solve(p);
  Topology t = make_topology(path_graph(m));
  PmgtParams prm = pmgt_params(p, t);
  PmgtState s = pmgt_init(p, gen::stack(ref.x_star, m), 1);
  s.y = gen::stack(s.y.colwise().mean().transpose(), m);
  CHECK(pmgt_merit(s, p, prm, ref.x_star) < 1e-24);
}

TEST_CASE("PMGT component-gradient cost is 3 per agent-step on average") {
  gen::Rng r(56);
  const int m = 2, n = 8;
  CompositeProblem p(gen::logistics(r, m, n, 2, 0.1), Regularizer::zero());
  Topology t = make_topology(path_graph(m));
  PmgtParams prm = pmgt_params(p, t, 1);
  PmgtState s = pmgt_init(p, Mat::Zero(m, 2), 77);
  Counters c;
  const int steps = 10000;
  for (int k = 0; k < steps; ++k) c += pmgt_step(s, p, prm);
  const double per = static_cast<double>(c.grads) / (steps * m);
  CHECK(per == doctest::Approx(3.0).epsilon(0.05));
  CHECK(c.comm == 2LL * steps);
  CHECK(c.prox == static_cast<long long>(steps) * m);
}

TEST_CASE("PMGT runs are reproducible from the seed") {
  gen::Rng r(57);
  CompositeProblem p(gen::logistics(r, 3, 6, 2, 0.1), Regularizer::zero());
  Topology t = make_topology(path_graph(3));
  PmgtParams prm = pmgt_params(p, t, 2);
  PmgtState a = pmgt_init(p, Mat::Zero(3, 2), 5), b = pmgt_init(p, Mat::Zero(3, 2), 5);
  for (int k = 0; k < 50; ++k) {
    pmgt_step(a, p, prm);
    pmgt_step(b, p, prm);
  }
  CHECK(a.x == b.x);
  PmgtState c = pmgt_init(p, Mat::Zero(3, 2), 6);
  for (int k = 0; k < 50; ++k) pmgt_step(c, p, prm);
  CHECK(c.x != a.x);
}
